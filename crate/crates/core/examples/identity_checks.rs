//! Certifies the pointwise identities of the transformation on the standard
//! log-spaced sample set plus seeded random draws.

use hedgehog::verify::identities::{identity_report, identity_spec, SampleSet};

fn main() -> hedgehog::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed must be an integer"));
    let set = SampleSet::standard().with_random(seed, 64);
    let report = identity_report(&set, 1e-9, &identity_spec())?;
    print!("{}", report.to_table());
    for c in &report.checks {
        if let Some(d) = &c.detail {
            println!("{}: {d}", c.check_name);
        }
    }
    Ok(())
}
