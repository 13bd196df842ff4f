//! Evaluates the removable-singularity functions across the series/closed-form
//! switch and shows that both branches agree where they meet.

use hedgehog::kernel::{eval_ftilde, KernelTable};

fn main() -> hedgehog::Result<()> {
    let table = KernelTable::standard();
    println!("{:>10} {:>24} {:>24} {:>24}", "x", "F0", "F1", "F4");
    for x in [0.0, 1e-8, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0] {
        println!("{x:>10} {:>24e} {:>24e} {:>24e}", eval_ftilde(0, x)?, eval_ftilde(1, x)?, eval_ftilde(4, x)?);
    }
    let x = 0.3;
    for i in 0..5 {
        let (s, c) = (table.series(i, x), table.closed(i, x));
        println!("F{i}({x}): series {s:e}, closed {c:e}, gap {:e}", (s - c).abs());
    }
    Ok(())
}
