//! The chain f -> Phi1 -> Phi2 -> Phi on a winding-one state, with the two
//! energy quadratures side by side.

use hedgehog::dynamics::{InitialData, ModelParams, SimState};
use hedgehog::grid::RadialGrid;
use hedgehog::kernel::QuadratureSpec;
use hedgehog::transforms::{skyrme_energy, skyrme_energy_pointwise, PhiSnapshot};

fn main() -> hedgehog::Result<()> {
    let grid = RadialGrid::new(256, 8.0, 5)?;
    let state = SimState::from_data(grid, ModelParams::skyrme(1), &InitialData::gaussian(0.8, 2.0, 0.5))?;
    let spec = QuadratureSpec::default();
    let snap = PhiSnapshot::of(&state, &spec)?;
    println!("{:>8} {:>14} {:>14} {:>14} {:>14}", "r", "Phi1", "Phi2", "Phi", "dt Phi");
    for j in (0..grid.n()).step_by(16) {
        println!(
            "{:8.4} {:14.6e} {:14.6e} {:14.6e} {:14.6e}",
            grid.r(j),
            snap.phi1.values[j],
            snap.phi2.values[j],
            snap.phi.values[j],
            snap.dt_phi.values[j]
        );
    }
    println!("energy: discrete Hamiltonian {:.10e}, midpoint rule {:.10e}", skyrme_energy(&state, &spec)?, skyrme_energy_pointwise(&state));
    Ok(())
}
