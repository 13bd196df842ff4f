//! Radial stencils with parity ghosts: the Laplacian of a Gaussian in five
//! dimensions, its second-order convergence, and Hardy ratios.

use hedgehog::grid::{hardy_ratio, laplacian, Field, Parity, RadialGrid};

fn main() -> hedgehog::Result<()> {
    for n in [64, 128, 256, 512] {
        let grid = RadialGrid::new(n, 6.0, 5)?;
        let f = Field::sample(&grid, Parity::Even, |r| (-r * r).exp());
        let lap = laplacian(&f, &grid)?;
        let err = (0..n / 2)
            .map(|j| {
                let r = grid.r(j);
                (lap.values[j] - (4.0 * r * r - 10.0) * (-r * r).exp()).abs()
            })
            .fold(0.0, f64::max);
        let ratio = hardy_ratio(&f, &grid)?;
        println!("N = {n:4}: max Laplacian error {err:.3e}, Hardy ratio {ratio:.6} (sharp 4/9 = {:.6})", 4.0 / 9.0);
    }
    Ok(())
}
