//! Residual of the wave equation for Phi, split by region, at two resolutions.

use hedgehog::dynamics::{step, InitialData, ModelParams, SimState};
use hedgehog::grid::RadialGrid;
use hedgehog::kernel::QuadratureSpec;
use hedgehog::verify::residual_phi_equation;

fn main() -> hedgehog::Result<()> {
    let spec = QuadratureSpec::default();
    for n in [256, 512, 1024] {
        let grid = RadialGrid::new(n, 16.0, 5)?;
        let mut s = SimState::from_data(grid, ModelParams::skyrme(1), &InitialData::gaussian(1.0, 2.0, 0.5))?;
        let dt = 0.25 * grid.h();
        for _ in 0..(0.5 / dt).round() as usize {
            s = step(&s, dt)?;
        }
        let next = step(&s, dt)?;
        let prev = step(&s, -dt)?;
        let r = residual_phi_equation(&prev, &s, &next, dt, &spec)?;
        println!(
            "N = {n:5}: L2 {:.4e}  Linf {:.4e}  r<1/2 {:.3e}  1/2..2 {:.3e}  r>2 {:.3e}",
            r.l2, r.linf, r.regional_l2[0], r.regional_l2[1], r.regional_l2[2]
        );
    }
    Ok(())
}
