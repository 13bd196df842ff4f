//! Evolves Gaussian data with the conservative scheme and prints energy and
//! the continuation quantity along the way.

use hedgehog::dynamics::{continuation_g, hamiltonian, run, EvolutionConfig, InitialData, ModelParams, SimState};
use hedgehog::grid::RadialGrid;
use hedgehog::kernel::QuadratureSpec;

fn main() -> hedgehog::Result<()> {
    let amplitude: f64 = std::env::args().nth(1).map_or(Ok(1.0), |a| a.parse()).expect("amplitude must be a number");
    let grid = RadialGrid::new(512, 16.0, 5)?;
    let state = SimState::from_data(grid, ModelParams::skyrme(0), &InitialData::gaussian(amplitude, 2.0, 0.5))?;
    let spec = QuadratureSpec::default();
    let e0 = hamiltonian(&state, &spec)?;
    let cfg = EvolutionConfig { t_end: 4.0, record_every: 128, ..Default::default() };
    let (outcome, _) = run(state, &cfg, &mut |s, dt| {
        let e = hamiltonian(s, &spec)?;
        println!("t = {:7.4}  dt = {dt:.3e}  E = {e:.12e}  drift = {:+.2e}  G = {:.4e}", s.t, (e - e0) / e0, continuation_g(s));
        Ok(())
    })?;
    println!("{outcome:?}");
    Ok(())
}
