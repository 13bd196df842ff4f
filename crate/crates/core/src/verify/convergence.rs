//! Self-convergence under simultaneous refinement `(h, dt) → (h/2, dt/2)`.

use serde::{Deserialize, Serialize};

use super::residual::residual_phi_equation;
use super::{CheckEntry, VerificationReport};
use crate::dynamics::{hamiltonian, step, InitialData, ModelParams, SimState};
use crate::error::{Error, Result};
use crate::grid::reduce::sum_by;
use crate::grid::RadialGrid;
use crate::kernel::quadrature::QuadratureSpec;
use crate::transforms::{compute_dt_phi, compute_phi};

/// Initial data used for refinement studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceProblem {
    Zero,
    /// `a = 10⁻³`: the linear regime.
    Tiny,
    /// `a = 1`.
    Standard,
    /// `a = 5`.
    Large,
}

impl ConvergenceProblem {
    pub const ALL: [ConvergenceProblem; 4] =
        [ConvergenceProblem::Zero, ConvergenceProblem::Tiny, ConvergenceProblem::Standard, ConvergenceProblem::Large];

    pub fn amplitude(self) -> f64 {
        match self {
            ConvergenceProblem::Zero => 0.0,
            ConvergenceProblem::Tiny => 1e-3,
            ConvergenceProblem::Standard => 1.0,
            ConvergenceProblem::Large => 5.0,
        }
    }

    pub fn data(self) -> InitialData {
        InitialData::gaussian(self.amplitude(), 2.0, 0.5)
    }

    pub fn name(self) -> &'static str {
        match self {
            ConvergenceProblem::Zero => "zero",
            ConvergenceProblem::Tiny => "tiny",
            ConvergenceProblem::Standard => "standard",
            ConvergenceProblem::Large => "large",
        }
    }
}

/// Grid and time parameters of a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyParams {
    pub base_n: usize,
    pub levels: usize,
    pub r_max: f64,
    pub t_end: f64,
    pub cfl: f64,
    pub n1: u32,
}

impl Default for StudyParams {
    fn default() -> Self {
        StudyParams { base_n: 1024, levels: 3, r_max: 16.0, t_end: 0.5, cfl: 0.25, n1: 0 }
    }
}

/// Observed order of one measured error sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderEstimate {
    pub quantity: String,
    /// One error per level (or per adjacent pair of levels for self-errors).
    pub errors: Vec<f64>,
    /// `−slope` of the least-squares fit of `log₂ error` against level.
    pub order: Option<f64>,
    /// Why no order is claimed: all-zero errors or a non-monotone sequence.
    pub inconclusive: Option<String>,
}

impl OrderEstimate {
    pub fn from_errors(quantity: &str, errors: Vec<f64>) -> Self {
        let mut est = OrderEstimate { quantity: quantity.into(), errors, order: None, inconclusive: None };
        let e = &est.errors;
        if e.len() < 2 {
            est.inconclusive = Some("fewer than two errors".into());
        } else if e.iter().all(|v| *v == 0.0) {
            est.inconclusive = Some("all errors are zero".into());
        } else if e.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            est.inconclusive = Some("zero or non-finite error".into());
        } else if e.windows(2).any(|w| w[1] >= w[0]) {
            est.inconclusive = Some("errors do not decrease monotonically".into());
        }
        if est.inconclusive.is_none() {
            est.order = Some(-least_squares_slope(&est.errors.iter().map(|v| v.log2()).collect::<Vec<_>>()));
        }
        est
    }

    pub fn is_conclusive(&self) -> bool {
        self.order.is_some()
    }
}

/// Slope of the least-squares line through `(k, y_k)`.
pub fn least_squares_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, v) in y.iter().enumerate() {
        let dx = k as f64 - mx;
        sxy += dx * (v - my);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub problem: ConvergenceProblem,
    pub params: StudyParams,
    pub nodes: Vec<usize>,
    pub dts: Vec<f64>,
    pub solution: OrderEstimate,
    pub energy_drift: OrderEstimate,
    pub residual: OrderEstimate,
    pub time_derivative: OrderEstimate,
}

/// What one level contributes.
struct Level {
    g: Vec<f64>,
    grid: RadialGrid,
    drift: f64,
    residual: f64,
    time_derivative: f64,
}

fn l2_on(v: &[f64], grid: &RadialGrid, len: usize) -> f64 {
    (grid.sphere_area() * grid.h() * sum_by(0, len, &|j| v[j] * v[j] * grid.r(j).powi(4))).sqrt()
}

fn run_level(problem: ConvergenceProblem, p: &StudyParams, n: usize, steps: usize, spec: &QuadratureSpec) -> Result<Level> {
    let grid = RadialGrid::new(n, p.r_max, 5)?;
    let mut s = SimState::from_data(grid, ModelParams::skyrme(p.n1), &problem.data())?;
    let dt = p.t_end / steps as f64;
    let e0 = hamiltonian(&s, spec)?;
    let mut prev = s.clone();
    for _ in 0..steps {
        prev = s;
        s = step(&prev, dt)?;
    }
    let e1 = hamiltonian(&s, spec)?;
    let drift = if e0 == 0.0 { (e1 - e0).abs() } else { ((e1 - e0) / e0).abs() };
    let next = step(&s, dt)?;
    let res = residual_phi_equation(&prev, &s, &next, dt, spec)?;
    let len = res.values.len();
    let pm = compute_phi(&prev, spec)?.values;
    let pp = compute_phi(&next, spec)?.values;
    let dphi = compute_dt_phi(&s).values;
    let gap: Vec<f64> = (0..grid.n()).map(|j| (pp[j] - pm[j]) / (2.0 * dt) - dphi[j]).collect();
    Ok(Level { g: s.g.values, grid, drift, residual: res.l2, time_derivative: l2_on(&gap, &grid, len) })
}

/// `‖g_coarse − R g_fine‖` with `R` averaging each pair of fine cells.
fn self_error(coarse: &Level, fine: &Level) -> f64 {
    let m = coarse.g.len();
    let diff: Vec<f64> = (0..m).map(|j| coarse.g[j] - 0.5 * (fine.g[2 * j] + fine.g[2 * j + 1])).collect();
    l2_on(&diff, &coarse.grid, m)
}

/// Runs `levels` nested grids `N = base_n 2^k` with `dt ∝ h` and fixed steps,
/// measuring each quantity per level.
pub fn convergence_study(problem: ConvergenceProblem, params: &StudyParams, spec: &QuadratureSpec) -> Result<ConvergenceReport> {
    if params.levels < 3 {
        return Err(Error::Config(format!("a refinement study needs at least 3 levels, got {}", params.levels)));
    }
    if !(params.cfl > 0.0 && params.cfl <= 0.5) || !(params.t_end > 0.0) {
        return Err(Error::Config(format!("need 0 < cfl <= 0.5 and t_end > 0, got {} and {}", params.cfl, params.t_end)));
    }
    let h0 = params.r_max / params.base_n as f64;
    let base_steps = (params.t_end / (params.cfl * h0)).ceil() as usize;
    let mut levels = Vec::new();
    let mut nodes = Vec::new();
    let mut dts = Vec::new();
    for k in 0..params.levels {
        let n = params.base_n << k;
        let steps = base_steps << k;
        levels.push(run_level(problem, params, n, steps, spec)?);
        nodes.push(n);
        dts.push(params.t_end / steps as f64);
    }
    let solution = OrderEstimate::from_errors("solution_self_error", levels.windows(2).map(|w| self_error(&w[0], &w[1])).collect());
    Ok(ConvergenceReport {
        problem,
        params: *params,
        nodes,
        dts,
        solution,
        energy_drift: OrderEstimate::from_errors("energy_drift", levels.iter().map(|l| l.drift).collect()),
        residual: OrderEstimate::from_errors("phi_equation_residual", levels.iter().map(|l| l.residual).collect()),
        time_derivative: OrderEstimate::from_errors("phi_time_derivative", levels.iter().map(|l| l.time_derivative).collect()),
    })
}

impl ConvergenceReport {
    pub fn estimates(&self) -> [&OrderEstimate; 4] {
        [&self.solution, &self.energy_drift, &self.residual, &self.time_derivative]
    }

    /// Checks that the solution, residual and time-derivative orders are
    /// within `tol` of 2. Inconclusive sequences are reported but do not fail.
    pub fn report(&self, tol: f64) -> VerificationReport {
        let mut rep = VerificationReport::new("convergence");
        let name = self.problem.name();
        let tags = [
            (&self.solution, "g self-converges at second order"),
            (&self.residual, "discrete residual of the Phi wave equation vanishes at second order"),
            (&self.time_derivative, "d_t Phi = A^1/2 d_t g to second order"),
        ];
        for (est, tag) in tags {
            let check = format!("{name}_{}_order", est.quantity);
            match (est.order, &est.inconclusive) {
                (Some(q), _) => rep.push(
                    CheckEntry::at_most(&check, tag, (q - 2.0).abs(), tol).with_detail(format!("order {q:.4}, errors {:?}", est.errors)),
                ),
                (None, Some(why)) => {
                    let mut e = CheckEntry::at_most(&check, tag, 0.0, tol).with_detail(format!("inconclusive: {why}"));
                    e.value = f64::NAN;
                    e.pass = true;
                    rep.push(e)
                }
                (None, None) => {}
            }
        }
        let drift = &self.energy_drift;
        rep.note(&format!("{name}_energy_drift"), format!("{:?} order {:?}", drift.errors, drift.order));
        rep.note(&format!("{name}_levels"), format!("N {:?}, dt {:?}, R {}, t_end {}", self.nodes, self.dts, self.params.r_max, self.params.t_end));
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_and_flags() {
        let e = OrderEstimate::from_errors("x", vec![1.0, 0.25, 0.0625]);
        assert!((e.order.unwrap() - 2.0).abs() < 1e-12);
        assert!(OrderEstimate::from_errors("x", vec![0.0, 0.0]).inconclusive.unwrap().contains("zero"));
        assert!(OrderEstimate::from_errors("x", vec![1.0, 2.0, 0.5]).inconclusive.unwrap().contains("monoton"));
    }

    #[test]
    fn zero_problem_is_inconclusive_by_zero() {
        let p = StudyParams { base_n: 64, r_max: 8.0, t_end: 0.25, ..Default::default() };
        let r = convergence_study(ConvergenceProblem::Zero, &p, &QuadratureSpec::default()).unwrap();
        assert!(r.estimates().iter().all(|e| e.errors.iter().all(|v| *v == 0.0) && !e.is_conclusive()));
        assert!(r.report(0.2).all_pass());
    }

    #[test]
    fn tiny_problem_is_second_order_on_small_grids() {
        let p = StudyParams { base_n: 128, r_max: 8.0, t_end: 0.5, ..Default::default() };
        let r = convergence_study(ConvergenceProblem::Tiny, &p, &QuadratureSpec::default()).unwrap();
        let rep = r.report(0.2);
        assert!(rep.all_pass(), "{}", rep.to_table());
        assert!(r.solution.is_conclusive() && r.residual.is_conclusive());
    }

    #[test]
    fn too_few_levels() {
        let p = StudyParams { levels: 2, ..Default::default() };
        assert!(convergence_study(ConvergenceProblem::Tiny, &p, &QuadratureSpec::default()).is_err());
    }
}
