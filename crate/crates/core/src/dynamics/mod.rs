//! Time evolution of the regularised field `g` on ℝ⁵.

pub mod initial;
pub mod model;
pub mod rhs;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::reduce::{max_by, sum_by};
use crate::grid::{bracket, Field, Parity, RadialGrid};
use crate::kernel::quadrature::QuadratureSpec;
use crate::kernel::special::KernelTable;

pub use initial::{GaussianProfile, InitialData};
pub use model::{face_mean, Background, InnerBranch, ModelParams, Scheme};

/// Fields `(g, ∂ₜg)` at time `t` on a d = 5 grid.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub g: Field,
    pub gt: Field,
    pub params: ModelParams,
    pub grid: RadialGrid,
    pub background: Arc<Background>,
}

impl SimState {
    pub fn new(grid: RadialGrid, params: ModelParams, g: Vec<f64>, gt: Vec<f64>) -> Result<Self> {
        if grid.dim() != 5 {
            return Err(Error::Contract("the evolution lives on a d = 5 grid".into()));
        }
        if g.len() != grid.n() || gt.len() != grid.n() {
            return Err(Error::Contract("initial data length does not match grid".into()));
        }
        if params.inner == InnerBranch::WaveMap && params.scheme != Scheme::Direct {
            return Err(Error::Contract("the wave-map inner branch is only available with the direct scheme".into()));
        }
        if let Some(j) = g.iter().chain(&gt).position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite initial value at entry {j}")));
        }
        let background = Arc::new(Background::new(&grid, params.n1, KernelTable::standard()));
        Ok(SimState { t: 0.0, g: Field::even(g), gt: Field::even(gt), params, grid, background })
    }

    pub fn zero(grid: RadialGrid, params: ModelParams) -> Result<Self> {
        let n = grid.n();
        SimState::new(grid, params, vec![0.0; n], vec![0.0; n])
    }

    pub fn from_data(grid: RadialGrid, params: ModelParams, data: &InitialData) -> Result<Self> {
        let g = grid.nodes().iter().map(|&r| data.g0.eval(r)).collect();
        let gt = grid.nodes().iter().map(|&r| data.g1.eval(r)).collect();
        SimState::new(grid, params, g, gt)
    }

    /// Same grid and background, new fields.
    pub fn with_fields(&self, t: f64, g: Vec<f64>, gt: Vec<f64>) -> Self {
        SimState { t, g: Field::even(g), gt: Field::even(gt), ..self.clone() }
    }

    /// `f = φ + r g` at every node.
    pub fn f(&self) -> Vec<f64> {
        (0..self.grid.n()).map(|j| self.background.f(j, self.g.values[j])).collect()
    }

    /// `∂_r g` (even ghost, zero exterior).
    pub fn g_r(&self) -> Vec<f64> {
        (0..self.grid.n()).map(|j| rhs::g_r(&self.g.values, &self.grid, j)).collect()
    }

    /// Mirror-ghost residual `|g(−r₀) − g(r₀)|`; the representation makes it vanish.
    pub fn parity_defect(&self) -> f64 {
        let v = &self.g.values;
        (crate::grid::ghost(v, -1, Parity::Even, crate::grid::OuterClosure::Zero) - v[0]).abs()
    }
}

/// `(∂ₜg, ∂ₜ∂ₜg)`.
pub fn rhs(state: &SimState) -> Result<(Field, Field)> {
    let acc = rhs::accel(&state.params, &state.grid, &state.background, &state.g.values, &state.gt.values)?;
    Ok((state.gt.clone(), Field::even(acc)))
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// One classical RK4 step; `dt` may be negative.
pub fn step(state: &SimState, dt: f64) -> Result<SimState> {
    let (p, grid, bg) = (&state.params, &state.grid, &*state.background);
    let g0 = &state.g.values;
    let v0 = &state.gt.values;
    let a1 = rhs::accel(p, grid, bg, g0, v0)?;
    let g1 = axpy(g0, 0.5 * dt, v0);
    let v1 = axpy(v0, 0.5 * dt, &a1);
    let a2 = rhs::accel(p, grid, bg, &g1, &v1)?;
    let g2 = axpy(g0, 0.5 * dt, &v1);
    let v2 = axpy(v0, 0.5 * dt, &a2);
    let a3 = rhs::accel(p, grid, bg, &g2, &v2)?;
    let g3 = axpy(g0, dt, &v2);
    let v3 = axpy(v0, dt, &a3);
    let a4 = rhs::accel(p, grid, bg, &g3, &v3)?;
    let n = g0.len();
    let mut g = Vec::with_capacity(n);
    let mut gt = Vec::with_capacity(n);
    for j in 0..n {
        g.push(g0[j] + dt / 6.0 * (v0[j] + 2.0 * v1[j] + 2.0 * v2[j] + v3[j]));
        gt.push(v0[j] + dt / 6.0 * (a1[j] + 2.0 * a2[j] + 2.0 * a3[j] + a4[j]));
    }
    Ok(state.with_fields(state.t + dt, g, gt))
}

/// Steps this much smaller than `cfl · h` are treated as a breakdown.
const MIN_STEP_FRACTION: f64 = 1e-6;

/// Two half steps of size `dt/2`, with the relative discrepancy from a single
/// full step as the error estimate.
pub fn doubled_step(state: &SimState, dt: f64) -> Result<(SimState, f64)> {
    let full = step(state, dt)?;
    let half = step(&step(state, 0.5 * dt)?, 0.5 * dt)?;
    let n = state.g.len();
    let dg = max_by(n, |j| (full.g.values[j] - half.g.values[j]).abs());
    let dv = max_by(n, |j| (full.gt.values[j] - half.gt.values[j]).abs());
    let sg = max_by(n, |j| half.g.values[j].abs());
    let sv = max_by(n, |j| half.gt.values[j].abs());
    let ratio = |d: f64, s: f64| if d == 0.0 { 0.0 } else { d / s };
    Ok((half, ratio(dg, sg).max(ratio(dv, sv + sg))))
}

/// `‖⟨r⟩g‖_∞ + ‖⟨r⟩(|∂ₜg| + |∂_r g|)‖_∞`.
pub fn continuation_g(state: &SimState) -> f64 {
    let g = &state.g.values;
    let gt = &state.gt.values;
    let grid = &state.grid;
    let a = max_by(g.len(), |j| bracket(grid.r(j)) * g[j].abs());
    let b = max_by(g.len(), |j| bracket(grid.r(j)) * (gt[j].abs() + rhs::g_r(g, grid, j).abs()));
    if g.is_empty() {
        0.0
    } else {
        a + b
    }
}

/// Energy density pieces of the discrete Hamiltonian at node `j`, excluding
/// the potential term: `V_j ½A_j ġ_j²` and the inner face term.
fn kinetic_and_gradient(bg: &Background, grid: &RadialGrid, g: &[f64], gt: &[f64], a: &impl Fn(usize) -> f64, j: usize) -> f64 {
    let h = grid.h();
    let n = g.len();
    let kin = bg.volume[j] * 0.5 * a(j) * gt[j] * gt[j];
    let face = if j == 0 {
        0.0
    } else {
        let d = (g[j] - g[j - 1]) / h;
        0.5 * h * bg.face_r4[j] * face_mean(a(j - 1), a(j)) * d * d
    };
    let last = if j + 1 == n {
        let d = -g[j] / h;
        0.5 * h * bg.face_r4[n] * face_mean(a(j), 1.0) * d * d
    } else {
        0.0
    };
    kin + face + last
}

/// The discrete Hamiltonian conserved by [`Scheme::Conservative`]; a
/// second-order quadrature of the Skyrme energy.
pub fn hamiltonian(state: &SimState, spec: &QuadratureSpec) -> Result<f64> {
    let t = KernelTable::standard();
    let bg = &*state.background;
    let g = &state.g.values;
    let gt = &state.gt.values;
    let a = |j: usize| bg.a(t, j, g[j]);
    let pot: Vec<Result<f64>> =
        crate::grid::reduce::map_nodes(g.len(), |j| Ok(bg.volume[j] * bg.w(t, j, g[j], spec)?));
    let pot = pot.into_iter().collect::<Result<Vec<f64>>>()?;
    let rest = sum_by(0, g.len(), &|j| kinetic_and_gradient(bg, &state.grid, g, gt, &a, j));
    Ok(crate::grid::reduce::pairwise_sum(&pot) + rest)
}

/// Kinetic plus gradient energy carried by the outermost `m` nodes.
pub fn outer_layer_energy(state: &SimState, m: usize) -> f64 {
    let t = KernelTable::standard();
    let bg = &*state.background;
    let g = &state.g.values;
    let gt = &state.gt.values;
    let n = g.len();
    let a = |j: usize| bg.a(t, j, g[j]);
    sum_by(n.saturating_sub(m), n, &|j| kinetic_and_gradient(bg, &state.grid, g, gt, &a, j))
}

/// Width of the boundary layer watched for contamination.
pub fn boundary_layer(n: usize) -> usize {
    (n / 64).max(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    /// Largest step `dt = cfl · h` (rounded down so that `t_end` is hit
    /// exactly); steps shrink below it only when the local error demands.
    pub cfl: f64,
    pub t_end: f64,
    pub blowup_threshold: f64,
    /// Diagnostics cadence in steps.
    pub record_every: usize,
    /// Boundary-layer energy fraction that aborts the run.
    pub boundary_tolerance: f64,
    /// Relative local error allowed per step, estimated by step doubling.
    pub step_tolerance: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig { cfl: 0.25, t_end: 10.0, blowup_threshold: 1e6, record_every: 64, boundary_tolerance: 1e-10, step_tolerance: 1e-9 }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::Config(format!("cfl must lie in (0, 0.5], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be finite and non-negative, got {}", self.t_end)));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(Error::Config("blowup_threshold must be positive".into()));
        }
        if !(self.step_tolerance > 0.0) {
            return Err(Error::Config("step_tolerance must be positive".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Step count and step size for a grid spacing `h`.
    pub fn steps(&self, h: f64) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, 0.0);
        }
        let n = (self.t_end / (self.cfl * h)).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    Completed { t: f64, steps: usize },
    BlowupFlagged { t: f64, g: f64 },
    BoundaryContaminated { t: f64, fraction: f64 },
}

impl RunOutcome {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunOutcome::Completed { .. })
    }
}

/// Advance to `t_end`, calling `sink` at step 0, every `record_every` steps
/// and at the final (or aborting) state.
pub fn run(
    initial: SimState,
    config: &EvolutionConfig,
    sink: &mut dyn FnMut(&SimState, f64) -> Result<()>,
) -> Result<(RunOutcome, SimState)> {
    config.validate()?;
    let (_, base_dt) = config.steps(initial.grid.h());
    let t0 = initial.t;
    let t_stop = t0 + config.t_end;
    let layer = boundary_layer(initial.grid.n());
    let e0 = hamiltonian(&initial, &QuadratureSpec::default())?.abs();
    let mut state = initial;
    sink(&state, base_dt)?;
    let mut k = 0usize;
    let mut uniform = true;
    let mut dt_next = base_dt;
    while state.t < t_stop {
        let mut dt = dt_next.min(base_dt);
        // Land on t_end exactly instead of leaving a sliver.
        if state.t + dt * (1.0 + 1e-9) >= t_stop {
            dt = t_stop - state.t;
        }
        let next = match doubled_step(&state, dt) {
            Ok((next, err)) if err <= config.step_tolerance => {
                let grow = 0.9 * (config.step_tolerance / err.max(1e-300)).powf(0.2);
                dt_next = dt * grow.min(2.0);
                next
            }
            Ok((_, err)) => {
                dt_next = dt * (0.9 * (config.step_tolerance / err).powf(0.2)).clamp(0.1, 0.5);
                if dt_next < MIN_STEP_FRACTION * base_dt {
                    let g = continuation_g(&state);
                    return Ok((RunOutcome::BlowupFlagged { t: state.t, g }, state));
                }
                continue;
            }
            Err(Error::BlowupSuspected { .. }) => {
                dt_next = 0.25 * dt;
                if dt_next < MIN_STEP_FRACTION * base_dt {
                    return Ok((RunOutcome::BlowupFlagged { t: state.t + dt, g: f64::INFINITY }, state));
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        uniform &= dt == base_dt;
        k += 1;
        let last = next.t + 1e-12 * base_dt >= t_stop;
        state = next;
        state.t = if last {
            t_stop
        } else if uniform {
            t0 + k as f64 * base_dt
        } else {
            state.t
        };
        let g = continuation_g(&state);
        if !(g <= config.blowup_threshold) {
            sink(&state, dt)?;
            return Ok((RunOutcome::BlowupFlagged { t: state.t, g }, state));
        }
        if e0 > 0.0 {
            let fraction = outer_layer_energy(&state, layer) / e0;
            if fraction > config.boundary_tolerance {
                sink(&state, dt)?;
                return Ok((RunOutcome::BoundaryContaminated { t: state.t, fraction }, state));
            }
        }
        if k % config.record_every == 0 || last {
            sink(&state, dt)?;
        }
    }
    let t = state.t;
    Ok((RunOutcome::Completed { t, steps: k }, state))
}
