//! Floating-point scans of the Lemma 1 function, the corollary margin and the
//! Hardy family.

use hedgehog::verify::scans::{corollary1_scan, hardy_family, hardy_report, lemma1_scan, Corollary1Params, Lemma1Params};

fn main() -> hedgehog::Result<()> {
    let lemma = lemma1_scan(&Lemma1Params::default())?;
    print!("{}", lemma.report().to_table());
    let corollary = corollary1_scan(&Corollary1Params::new(lemma.r0))?;
    print!("{}", corollary.report().to_table());
    let family = hardy_family(0.16, 5)?;
    for m in &family {
        println!("eps = {:<6} h = {:<10} ratio = {:.6}", m.eps, m.h, m.ratio);
    }
    print!("{}", hardy_report(&family).to_table());
    Ok(())
}
