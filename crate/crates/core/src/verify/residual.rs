//! Discrete residual of the five-dimensional wave equation satisfied by `Φ`:
//! `∂ₜₜΦ − Δ₅Φ = S(r) − (3/2)Φ + G₃`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{boundary_layer, SimState};
use crate::error::{Error, Result};
use crate::grid::reduce::{map_nodes, max_by, sum_by};
use crate::grid::{laplacian_at, OuterClosure, Parity, RadialGrid};
use crate::kernel::auxiliary::PhiStatics;
use crate::kernel::quadrature::QuadratureSpec;
use crate::kernel::special::KernelTable;
use crate::transforms::{compute_phi, g3_integral};

/// Boundaries of the regional breakdown: inside the inner cutoff, across
/// the cutoff transitions, and the far field.
pub const REGION_EDGES: [f64; 2] = [0.5, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiResidual {
    pub t: f64,
    /// Residual on nodes `0..len`; the outer closure layer is excluded.
    pub values: Vec<f64>,
    /// `(∫ res² r⁴ dr)^{1/2}` over the whole ball of `ℝ⁵`.
    pub l2: f64,
    pub linf: f64,
    /// L² norms over `r < ½`, `½ ≤ r < 2` and `r ≥ 2`.
    pub regional_l2: [f64; 3],
}

fn l2_over(v: &[f64], grid: &RadialGrid, lo: usize, hi: usize) -> f64 {
    (grid.sphere_area() * grid.h() * sum_by(lo, hi, &|j| v[j] * v[j] * grid.r(j).powi(4))).sqrt()
}

/// Residual at the middle of three states spaced `dt` apart in time.
pub fn residual_phi_equation(
    prev: &SimState,
    cur: &SimState,
    next: &SimState,
    dt: f64,
    spec: &QuadratureSpec,
) -> Result<PhiResidual> {
    if prev.grid != cur.grid || next.grid != cur.grid {
        return Err(Error::Contract("residual snapshots must share a grid".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Contract(format!("snapshot spacing must be positive, got {dt}")));
    }
    let grid = cur.grid;
    let pm = compute_phi(prev, spec)?.values;
    let p0 = compute_phi(cur, spec)?.values;
    let pp = compute_phi(next, spec)?.values;
    let g3 = g3_integral(cur, spec)?.values;
    let st = PhiStatics::new(KernelTable::standard(), cur.params.n1, *spec);
    let len = grid.n().saturating_sub(boundary_layer(grid.n()));
    let sources = map_nodes(len, |j| st.source(grid.r(j)));
    let mut values = Vec::with_capacity(len);
    for (j, s) in sources.into_iter().enumerate() {
        let tt = (pp[j] - 2.0 * p0[j] + pm[j]) / (dt * dt);
        let lap = laplacian_at(&p0, &grid, j, Parity::Even, OuterClosure::Extrapolate);
        values.push(tt - lap - (s? - 1.5 * p0[j] + g3[j]));
    }
    let l2 = l2_over(&values, &grid, 0, len);
    let linf = if values.is_empty() { 0.0 } else { max_by(len, |j| values[j].abs()) };
    let a = grid.index_range(0.0, REGION_EDGES[0]).end.min(len);
    let b = grid.index_range(0.0, REGION_EDGES[1]).end.min(len);
    let regional_l2 = [l2_over(&values, &grid, 0, a), l2_over(&values, &grid, a, b), l2_over(&values, &grid, b, len)];
    Ok(PhiResidual { t: cur.t, values, l2, linf, regional_l2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{step, GaussianProfile, InitialData, ModelParams};

    #[test]
    fn zero_run_has_zero_residual() {
        let grid = RadialGrid::new(128, 8.0, 5).unwrap();
        let s = SimState::zero(grid, ModelParams::skyrme(0)).unwrap();
        let r = residual_phi_equation(&s, &s, &s, 0.01, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.linf, 0.0);
        assert_eq!(r.l2, 0.0);
    }

    fn residual_at(n: usize) -> PhiResidual {
        let grid = RadialGrid::new(n, 8.0, 5).unwrap();
        let data = InitialData { g0: GaussianProfile::new(0.5, 2.0, 0.6), g1: GaussianProfile::ZERO };
        let s = SimState::from_data(grid, ModelParams::skyrme(0), &data).unwrap();
        let dt = 0.25 * grid.h();
        let a = step(&s, dt).unwrap();
        let b = step(&a, dt).unwrap();
        residual_phi_equation(&s, &a, &b, dt, &QuadratureSpec::default()).unwrap()
    }

    #[test]
    fn residual_decreases_at_second_order() {
        let (c, f) = (residual_at(128), residual_at(256));
        let order = (c.l2 / f.l2).log2();
        assert!((order - 2.0).abs() < 0.3, "{} {} -> {order}", c.l2, f.l2);
        let total: f64 = f.regional_l2.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((total - f.l2).abs() <= 1e-12 * f.l2);
    }
}
