//! The nonlocal chain `f → Φ₁ → Φ₂ → Φ` and the diagnostics built on it.

use serde::{Deserialize, Serialize};

use crate::dynamics::{continuation_g, hamiltonian, rhs, SimState};
use crate::error::{Error, Result};
use crate::grid::reduce::{map_nodes, max_by, min_by, sum_by};
use crate::grid::{coercivity_functional, gradient_energy, norm_h1, norm_l2, Field, RadialGrid};
use crate::kernel::auxiliary::{a1, b_fast, eval_g1, eval_g2, k_weight, PhiStatics};
use crate::kernel::quadrature::{integrate, integrate_split, QuadratureSpec};
use crate::kernel::special::KernelTable;

/// Collects per-node results, reporting the first failing node.
fn per_node(n: usize, f: impl Fn(usize) -> Result<f64> + Sync + Send) -> Result<Vec<f64>> {
    let out = map_nodes(n, |j| f(j).map_err(|e| (j, e)));
    out.into_iter()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|(index, e)| Error::AtNode { index, source: Box::new(e) })
}

fn statics(state: &SimState, spec: &QuadratureSpec) -> PhiStatics<'static> {
    PhiStatics::new(KernelTable::standard(), state.params.n1, *spec)
}

/// `∫₀^g w(B(r_j, y)) dy` with the phase of node `j`.
fn b_integral(state: &SimState, j: usize, g: f64, w: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    if g == 0.0 {
        return Ok(0.0);
    }
    let bg = &*state.background;
    let (r, phi) = (bg.r[j], bg.phi[j]);
    let local = spec.keyed_to_frequency(r, g);
    integrate(|y| w(b_fast(r, y, phi)), 0.0, g, &local)
}

/// `Φ = ∫₀^g B^{1/2} dy + offset(r)` at every node.
pub fn compute_phi(state: &SimState, spec: &QuadratureSpec) -> Result<Field> {
    let st = statics(state, spec);
    let g = &state.g.values;
    let v = per_node(g.len(), |j| Ok(b_integral(state, j, g[j], f64::sqrt, spec)? + st.offset(state.grid.r(j))?))?;
    Ok(Field::even(v))
}

/// `Φ₁ = ∫_{N₁π}^{f} A₁(r, y)^{1/2} dy`, a field on ℝ³ (odd in `r`).
pub fn compute_phi1(state: &SimState, spec: &QuadratureSpec) -> Result<Field> {
    let bg = &*state.background;
    let top = crate::dynamics::model::winding_value(state.params.n1);
    let g = &state.g.values;
    let v = per_node(g.len(), |j| {
        let r = bg.r[j];
        if bg.aligned[j] {
            // f − N₁π = r g exactly; substitute y = N₁π + r s.
            return Ok(r * b_integral(state, j, g[j], f64::sqrt, spec)?);
        }
        let f = bg.f(j, g[j]);
        integrate_split(|y| a1(r, y).sqrt(), top, f, std::f64::consts::PI, spec)
    })?;
    Ok(Field::odd(v))
}

/// `Φ₂ = Φ₁ / r`.
pub fn compute_phi2(state: &SimState, spec: &QuadratureSpec) -> Result<Field> {
    Ok(phi2_from(&compute_phi1(state, spec)?, &state.grid))
}

pub fn phi2_from(phi1: &Field, grid: &RadialGrid) -> Field {
    Field::even(phi1.values.iter().enumerate().map(|(j, v)| v / grid.r(j)).collect())
}

/// `∂ₜΦ = A^{1/2} ∂ₜg` with `A = B(r, g)`.
pub fn compute_dt_phi(state: &SimState) -> Field {
    let bg = &*state.background;
    let t = KernelTable::standard();
    let g = &state.g.values;
    let gt = &state.gt.values;
    Field::even(map_nodes(g.len(), |j| bg.a(t, j, g[j]).sqrt() * gt[j]))
}

/// Energy conserved by the evolution: the discrete Hamiltonian of the
/// conservative scheme, a second-order quadrature of
/// `½∫A(f_t² + f_r²) r² dr + ∫ sin²f (1 + sin²f/(2r²)) dr`.
pub fn skyrme_energy(state: &SimState, spec: &QuadratureSpec) -> Result<f64> {
    hamiltonian(state, spec)
}

/// The same energy by the midpoint rule on nodes with `f_r = φ' + g + r g_r`
/// from central differences; independent of the scheme's discrete structure.
pub fn skyrme_energy_pointwise(state: &SimState) -> f64 {
    let bg = &*state.background;
    let grid = &state.grid;
    let g = &state.g.values;
    let gt = &state.gt.values;
    let h = grid.h();
    h * sum_by(0, g.len(), &|j| {
        let r = bg.r[j];
        let tr = bg.trig(j, g[j]);
        let a = 1.0 + 2.0 * tr.sin_sq / (r * r);
        let ft = r * gt[j];
        let fr = bg.dphi[j] + g[j] + r * rhs::g_r(g, grid, j);
        0.5 * a * (ft * ft + fr * fr) * r * r + tr.sin_sq * (1.0 + tr.sin_sq / (2.0 * r * r))
    })
}

/// `G₃ = ½ ∫₀^g K(B) dy`, `K = 3B^{3/2} + B^{−1/2} − B^{−3/2}`.
pub fn g3_integral(state: &SimState, spec: &QuadratureSpec) -> Result<Field> {
    let g = &state.g.values;
    let v = per_node(g.len(), |j| Ok(0.5 * b_integral(state, j, g[j], k_weight, spec)?))?;
    Ok(Field::even(v))
}

/// `(9/8) G₂(r, g)²/r² − |G₁(r, g)|` at one point.
pub fn corollary1_point(r: f64, g: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g2 = eval_g2(r, g, spec)?;
    let g1 = eval_g1(r, g, spec)?;
    Ok(9.0 / 8.0 * g2 * g2 / (r * r) - g1.abs())
}

/// Minimum of [`corollary1_point`] over nodes with `r ≤ r₀`; 0 when no node
/// qualifies. Only meaningful where the phase is aligned.
pub fn corollary1_margin(state: &SimState, r0: f64, spec: &QuadratureSpec) -> Result<f64> {
    let grid = &state.grid;
    let m = grid.index_range(0.0, r0).end;
    let g = &state.g.values;
    let v = per_node(m, |j| corollary1_point(grid.r(j), g[j], spec))?;
    Ok(v.into_iter().fold(0.0, f64::min))
}

/// `Φ` and its companions at one time.
#[derive(Debug, Clone)]
pub struct PhiSnapshot {
    pub t: f64,
    pub phi: Field,
    pub phi1: Field,
    pub phi2: Field,
    pub dt_phi: Field,
}

impl PhiSnapshot {
    pub fn of(state: &SimState, spec: &QuadratureSpec) -> Result<Self> {
        let phi1 = compute_phi1(state, spec)?;
        let phi2 = phi2_from(&phi1, &state.grid);
        Ok(PhiSnapshot { t: state.t, phi: compute_phi(state, spec)?, phi1, phi2, dt_phi: compute_dt_phi(state) })
    }
}

/// One row of the run's time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "G")]
    pub continuation: f64,
    pub l2_phi: f64,
    pub l2_dtphi: f64,
    pub h1_phi: f64,
    pub coercivity: f64,
    /// `∫|∇Φ|² dx`, the scale the coercivity functional is judged against.
    pub grad_energy: f64,
    pub g1_margin: f64,
    /// `‖r² g‖_∞`.
    pub r2g_sup: f64,
    pub dt: f64,
}

impl DiagnosticsRecord {
    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.energy,
            self.continuation,
            self.l2_phi,
            self.l2_dtphi,
            self.h1_phi,
            self.coercivity,
            self.grad_energy,
            self.g1_margin,
            self.r2g_sup,
            self.dt,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Everything the diagnostics need besides the state.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsContext {
    pub spec: QuadratureSpec,
    /// Radius below which the `G₁` bound is monitored.
    pub r0: f64,
}

pub fn diagnostics(state: &SimState, dt: f64, ctx: &DiagnosticsContext) -> Result<DiagnosticsRecord> {
    let grid = &state.grid;
    let phi = compute_phi(state, &ctx.spec)?;
    let dt_phi = compute_dt_phi(state);
    let g = &state.g.values;
    Ok(DiagnosticsRecord {
        t: state.t,
        energy: skyrme_energy(state, &ctx.spec)?,
        continuation: continuation_g(state),
        l2_phi: norm_l2(&phi, grid)?,
        l2_dtphi: norm_l2(&dt_phi, grid)?,
        h1_phi: norm_h1(&phi, grid)?,
        coercivity: coercivity_functional(&phi, grid)?,
        grad_energy: gradient_energy(&phi.values, grid),
        g1_margin: corollary1_margin(state, ctx.r0, &ctx.spec)?,
        r2g_sup: max_by(g.len(), |j| grid.r(j).powi(2) * g[j].abs()),
        dt,
    })
}

/// `min_j` of a field: handy for positivity monitors.
pub fn field_min(f: &Field) -> f64 {
    min_by(f.len(), |j| f.values[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{InitialData, ModelParams};
    use crate::kernel::auxiliary::eval_b;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn gaussian(n: usize, r_max: f64, n1: u32, a: f64) -> SimState {
        let grid = RadialGrid::new(n, r_max, 5).unwrap();
        let data = InitialData {
            g0: crate::dynamics::GaussianProfile::new(a, 1.5, 0.5),
            g1: crate::dynamics::GaussianProfile::new(0.5 * a, 1.0, 0.4),
        };
        SimState::from_data(grid, ModelParams::skyrme(n1), &data).unwrap()
    }

    fn constant(n1: u32, c: f64) -> SimState {
        let grid = RadialGrid::new(64, 2.0, 5).unwrap();
        SimState::new(grid, ModelParams::skyrme(n1), vec![c; 64], vec![0.0; 64]).unwrap()
    }

    #[test]
    fn zero_fields_give_zero_phi() {
        let s = SimState::zero(RadialGrid::new(64, 8.0, 5).unwrap(), ModelParams::skyrme(0)).unwrap();
        for f in [compute_phi(&s, &spec()).unwrap(), compute_phi1(&s, &spec()).unwrap(), g3_integral(&s, &spec()).unwrap()] {
            assert!(f.values.iter().all(|v| *v == 0.0));
        }
        assert_eq!(skyrme_energy(&s, &spec()).unwrap(), 0.0);
        assert_eq!(corollary1_margin(&s, 0.5, &spec()).unwrap(), 0.0);
    }

    #[test]
    fn wound_statics_vanish_inside_half() {
        let s = SimState::zero(RadialGrid::new(64, 4.0, 5).unwrap(), ModelParams::skyrme(1)).unwrap();
        let phi = compute_phi(&s, &spec()).unwrap();
        for j in s.grid.index_range(0.0, 0.5) {
            assert_eq!(phi.values[j], 0.0);
        }
        let phi1 = compute_phi1(&s, &spec()).unwrap();
        for j in s.grid.index_range(0.0, 1.0) {
            assert_eq!(phi1.values[j], 0.0);
        }
    }

    #[test]
    fn small_radius_limit_of_phi() {
        // ∫₀^c √(1+2y²) dy = ½[c√(1+2c²) + asinh(√2 c)/√2].
        let c = 1.3_f64;
        let oracle = 0.5 * (c * (1.0 + 2.0 * c * c).sqrt() + (2f64.sqrt() * c).asinh() / 2f64.sqrt());
        let s = constant(0, c);
        let phi = compute_phi(&s, &spec()).unwrap();
        let r0 = s.grid.r(0);
        // B − (1+2y²) = O(r²y⁴).
        assert!((phi.values[0] - oracle).abs() < 2.0 * r0 * r0 * c.powi(5), "{} vs {oracle}", phi.values[0]);
    }

    #[test]
    fn phi1_is_r_times_phi2() {
        let s = gaussian(256, 8.0, 1, 2.0);
        let p1 = compute_phi1(&s, &spec()).unwrap();
        let p2 = compute_phi2(&s, &spec()).unwrap();
        for j in 0..s.grid.n() {
            let r = s.grid.r(j);
            assert!((p1.values[j] - r * p2.values[j]).abs() <= 4.0 * f64::EPSILON * p1.values[j].abs());
        }
    }

    #[test]
    fn phi_minus_phi2_is_the_tail() {
        let st = PhiStatics::new(KernelTable::standard(), 1, spec());
        for n1 in [0, 1] {
            let s = gaussian(256, 8.0, n1, 2.0);
            let phi = compute_phi(&s, &spec()).unwrap();
            let p2 = compute_phi2(&s, &spec()).unwrap();
            for j in 0..s.grid.n() {
                let r = s.grid.r(j);
                let expect = if n1 == 0 { 0.0 } else { st.tail(r).unwrap() };
                if r <= 0.5 {
                    assert_eq!(expect, 0.0);
                }
                let d = phi.values[j] - p2.values[j];
                assert!((d - expect).abs() < 1e-10 * (1.0 + phi.values[j].abs()), "N1={n1} r={r}: {d} vs {expect}");
            }
        }
    }

    #[test]
    fn dt_phi_limits() {
        let s = gaussian(128, 8.0, 1, 2.0);
        let z = s.with_fields(0.0, s.g.values.clone(), vec![0.0; 128]);
        assert!(compute_dt_phi(&z).values.iter().all(|v| *v == 0.0));
        let d = compute_dt_phi(&s);
        let (g, gt) = (s.g.values[0], s.gt.values[0]);
        let r = s.grid.r(0);
        let lim = (1.0 + 2.0 * g * g).sqrt() * gt;
        assert!((d.values[0] - lim).abs() < 10.0 * r * r * g.powi(4) * gt.abs());
        for j in 0..128 {
            let b = eval_b(s.grid.r(j), s.g.values[j], s.background.phi[j]).unwrap();
            assert!((d.values[j] - b.sqrt() * s.gt.values[j]).abs() < 1e-12 * (1.0 + d.values[j].abs()));
        }
    }

    #[test]
    fn dt_phi_matches_time_difference_of_phi() {
        let s = gaussian(256, 8.0, 1, 1.0);
        let mut errs = Vec::new();
        for dt in [4e-3, 2e-3] {
            let fwd = crate::dynamics::step(&s, dt).unwrap();
            let back = crate::dynamics::step(&s, -dt).unwrap();
            let pf = compute_phi(&fwd, &spec()).unwrap();
            let pb = compute_phi(&back, &spec()).unwrap();
            let d = compute_dt_phi(&s);
            let e = (0..256).map(|j| ((pf.values[j] - pb.values[j]) / (2.0 * dt) - d.values[j]).abs()).fold(0.0, f64::max);
            errs.push(e);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((order - 2.0).abs() < 0.2, "{errs:?}");
    }

    #[test]
    fn energy_forms_agree_and_are_positive() {
        let mut gaps = Vec::new();
        for n in [512, 1024] {
            let s = gaussian(n, 8.0, 1, 1.5);
            let e = skyrme_energy(&s, &spec()).unwrap();
            let p = skyrme_energy_pointwise(&s);
            assert!(e > 0.0 && p > 0.0);
            gaps.push((e - p).abs() / e);
        }
        assert!(gaps[1] < 1e-4 && gaps[0] / gaps[1] > 3.0, "{gaps:?}");
    }

    #[test]
    fn static_energy_is_potential_plus_gradient() {
        // Static f: E = ½∫A f_r² r² + ∫ sin²f(1 + sin²f/(2r²)), by a fine oracle.
        let s = gaussian(2048, 8.0, 0, 1.0);
        let s = s.with_fields(0.0, s.g.values.clone(), vec![0.0; 2048]);
        let p = crate::dynamics::GaussianProfile::new(1.0, 1.5, 0.5);
        let n = 400_000;
        let hh = 8.0 / n as f64;
        let oracle: f64 = (0..n)
            .map(|k| {
                let r = (k as f64 + 0.5) * hh;
                let d = 1e-5;
                let f = |r: f64| r * p.eval(r);
                let fr = (f(r + d) - f(r - d)) / (2.0 * d);
                let s2 = f(r).sin().powi(2);
                hh * (0.5 * (1.0 + 2.0 * s2 / (r * r)) * fr * fr * r * r + s2 * (1.0 + s2 / (2.0 * r * r)))
            })
            .sum();
        let e = skyrme_energy(&s, &spec()).unwrap();
        assert!((e - oracle).abs() < 1e-4 * oracle, "{e} vs {oracle}");
    }

    #[test]
    fn g3_small_radius_limit() {
        let c = 0.9_f64;
        let s = constant(0, c);
        let k = |y: f64| {
            let b = 1.0 + 2.0 * y * y;
            3.0 * b.powf(1.5) + b.powf(-0.5) - b.powf(-1.5)
        };
        let oracle = 0.5 * integrate(k, 0.0, c, &spec()).unwrap();
        let v = g3_integral(&s, &spec()).unwrap().values[0];
        let r0 = s.grid.r(0);
        assert!((v - oracle).abs() < 20.0 * r0 * r0, "{v} vs {oracle}");
    }

    #[test]
    fn corollary_margin_is_nonnegative_on_a_state() {
        let s = gaussian(128, 4.0, 0, 3.0);
        let m = corollary1_margin(&s, 0.5, &spec()).unwrap();
        assert!(m >= -1e-10, "{m}");
    }

    #[test]
    fn diagnostics_are_finite() {
        let s = gaussian(256, 8.0, 1, 1.0);
        let ctx = DiagnosticsContext { spec: spec(), r0: 0.5 };
        let d = diagnostics(&s, 0.01, &ctx).unwrap();
        assert!(d.is_finite());
        assert!(d.energy > 0.0 && d.coercivity >= -1e-8 * d.h1_phi.powi(2));
    }
}
