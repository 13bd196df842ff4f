//! Contrast fixture: the same focusing data with the Skyrme correction
//! switched off inside r < 1, as in the wave-map limit, may flag blowup.

use hedgehog::dynamics::{run, EvolutionConfig, InitialData, InnerBranch, ModelParams, Scheme, SimState};
use hedgehog::grid::RadialGrid;

fn main() -> hedgehog::Result<()> {
    let grid = RadialGrid::new(1024, 32.0, 5)?;
    let data = InitialData::gaussian(10.0, 2.0, 0.5);
    let cfg = EvolutionConfig { t_end: 10.0, ..Default::default() };
    for inner in [InnerBranch::Skyrme, InnerBranch::WaveMap] {
        let params = ModelParams { n1: 0, scheme: Scheme::Direct, inner };
        let state = SimState::from_data(grid, params, &data)?;
        let (outcome, _) = run(state, &cfg, &mut |_, _| Ok(()))?;
        println!("{inner:?}: {outcome:?}");
    }
    Ok(())
}
