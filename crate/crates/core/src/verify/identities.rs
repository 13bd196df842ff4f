//! Pointwise identities of the transformation chain, checked on samples
//! `(r, f)` with analytic derivatives on one side and quadrature on the other.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CheckEntry, VerificationReport};
use crate::error::Result;
use crate::grid::reduce::map_nodes;
use crate::kernel::auxiliary::{a1, b_aligned, b_fast};
use crate::kernel::jet::{Jet, Real};
use crate::kernel::quadrature::{integrate, integrate_split, QuadratureSpec};
use crate::kernel::special::KernelTable;

/// `r > 0`, field value `f = N₁π + offset`.
/// The closed-form sides are evaluated through `offset`, which is exact
/// under the π-periodicity of `sin²` and `sin 2f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentitySample {
    pub r: f64,
    pub offset: f64,
    pub n1: u32,
}

impl IdentitySample {
    pub fn new(r: f64, offset: f64, n1: u32) -> Self {
        IdentitySample { r, offset, n1 }
    }

    pub fn base(&self) -> f64 {
        self.n1 as f64 * PI
    }

    pub fn f(&self) -> f64 {
        self.base() + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub samples: Vec<IdentitySample>,
}

impl SampleSet {
    /// Log-spaced `r ∈ [10⁻³, 10]`, offsets in `[−3π, 3π]`, `N₁ ∈ {0, 1, 2}`.
    pub fn standard() -> Self {
        let radii: Vec<f64> = (0..=16).map(|k| 10f64.powf(-3.0 + k as f64 / 4.0)).collect();
        let mut offsets: Vec<f64> = (0..=12).map(|k| -3.0 * PI + k as f64 * PI / 2.0).collect();
        offsets.extend([-2.3, -0.7, 0.2, 1.1, 3.0, 7.5]);
        let mut samples = Vec::new();
        for n1 in 0..=2 {
            for &r in &radii {
                for &o in &offsets {
                    samples.push(IdentitySample::new(r, o, n1));
                }
            }
        }
        SampleSet { samples }
    }

    /// Adds `count` seeded draws from the same ranges.
    pub fn with_random(mut self, seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let r = 10f64.powf(rng.gen_range(-3.0..1.0));
            let o = rng.gen_range(-3.0 * PI..3.0 * PI);
            let n1 = rng.gen_range(0..=2);
            self.samples.push(IdentitySample::new(r, o, n1));
        }
        self
    }

    pub fn restricted(&self, r_max: f64) -> Self {
        SampleSet { samples: self.samples.iter().copied().filter(|s| s.r <= r_max).collect() }
    }
}

/// Tight tolerances: the checks certify to 1e−9.
pub fn identity_spec() -> QuadratureSpec {
    QuadratureSpec { max_panels: 1 << 16, ..QuadratureSpec::default() }.with_tolerances(1e-15, 1e-13)
}

fn rel(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff.abs() / scale.max(f64::MIN_POSITIVE)
    }
}

fn b1(r: f64, y: f64) -> f64 {
    a1(r, y)
}

/// `∂_zzΦ̃₁ − ∂_zΦ̃₁ sin2f/(A₁r²)` and `−2∂_ρ∂_zΦ̃₁ − ∂_zΦ̃₁ 4sin²f/(A₁r³)`,
/// each relative to its terms; derivatives of `∂_zΦ̃₁ = B₁^{1/2}` by jets.
pub fn z_derivative_cancellation(s: &IdentitySample) -> (f64, f64) {
    let (r, f) = (s.r, s.f());
    let dz = a1(Jet::constant(r), Jet::var(f)).sqrt();
    let drho = a1(Jet::var(r), Jet::constant(f)).sqrt();
    let a = a1(r, f);
    let t1 = dz.v * (2.0 * f).sin() / (a * r * r);
    let t2 = dz.v / a * 4.0 * f.sin().powi(2) / r.powi(3);
    (rel(dz.d1 - t1, dz.d1.abs() + t1.abs()), rel(-2.0 * drho.d1 - t2, 2.0 * drho.d1.abs() + t2.abs()))
}

/// `Δ_{3,ρ}Φ̃₁(r, f)` by differentiating the quadrature in `ρ`, against
/// `(1/r²)∫(B₁^{−1/2} − B₁^{−3/2})`.
pub fn laplacian_under_integral(s: &IdentitySample, spec: &QuadratureSpec) -> Result<f64> {
    let (r, f, lo) = (s.r, s.f(), s.base());
    let rj = Jet::var(r);
    let phi = integrate_split(|y| a1(rj, Jet::constant(y)).sqrt(), lo, f, PI, spec)?;
    let lhs = phi.d2 + 2.0 / r * phi.d1;
    let rhs = integrate_split(
        |y| {
            let b = b1(r, y);
            b.powf(-0.5) - b.powf(-1.5)
        },
        lo,
        f,
        PI,
        spec,
    )? / (r * r);
    Ok(rel(lhs - rhs, rhs.abs()))
}

fn abs_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let loose = QuadratureSpec::default().with_tolerances(1e-300, 1e-6);
    integrate_split(|y| f(y).abs(), a, b, PI, &loose).map(f64::abs)
}

/// These integrands cancel over every period, so an absolute tolerance tied
/// to `∫|w|` replaces one tied to the (vanishing) net value.
fn cancelling(spec: &QuadratureSpec, mass: f64) -> QuadratureSpec {
    spec.with_tolerances(spec.abs_tol.max(1e-14 * mass), spec.rel_tol)
}

/// `A₁^{−1/2} sin2f / r²` against `(1/r²)∫B₁^{−3/2}(2 − r²(B₁² − 1))`.
pub fn sin2f_integral_form(s: &IdentitySample, spec: &QuadratureSpec) -> Result<f64> {
    let (r, f, lo) = (s.r, s.f(), s.base());
    let o = s.offset;
    let lhs = a1(r, o).powf(-0.5) * (2.0 * o).sin() / (r * r);
    let w = |y: f64| {
        let b = b1(r, y);
        b.powf(-1.5) * (2.0 - r * r * (b * b - 1.0))
    };
    let mass = abs_integral(w, lo, f)?;
    let rhs = integrate_split(w, lo, f, PI, &cancelling(spec, mass))? / (r * r);
    let scale = lhs.abs().max(mass / (r * r));
    Ok(rel(lhs - rhs, scale))
}

/// `A₁^{−1/2} sin²f sin2f / r⁴` against its two-integral representation.
pub fn sin2_sin2f_integral_form(s: &IdentitySample, spec: &QuadratureSpec) -> Result<f64> {
    let (r, f, lo) = (s.r, s.f(), s.base());
    let o = s.offset;
    let lhs = a1(r, o).powf(-0.5) * o.sin().powi(2) * (2.0 * o).sin() / r.powi(4);
    let w1 = |y: f64| {
        let b = b1(r, y);
        2.0 * b.sqrt() - b.powf(-1.5) - b.powf(-0.5)
    };
    let w2 = |y: f64| {
        let b = b1(r, y);
        b.powf(-1.5) * (-3.0 * b.powi(3) + 5.0 * b * b - b - 1.0)
    };
    let (m1, m2) = (abs_integral(w1, lo, f)?, abs_integral(w2, lo, f)?);
    let i1 = integrate_split(w1, lo, f, PI, &cancelling(spec, m1))? / (r * r);
    let i2 = 0.5 * integrate_split(w2, lo, f, PI, &cancelling(spec, m2))?;
    let scale = lhs.abs().max(m1 / (r * r) + 0.5 * m2);
    Ok(rel(lhs - (i1 + i2), scale))
}

/// `∂_g ∫₀^g B^{1/2} dy = B(r, g)^{1/2}`, the chain-rule core of `∂ₜΦ = A^{1/2}∂ₜg`;
/// the left side differentiates the quadrature through `y = g s`.
pub fn time_derivative_identity(s: &IdentitySample, spec: &QuadratureSpec) -> Result<f64> {
    let r = s.r;
    let phase = KernelTable::standard().cutoffs.phi(s.n1, r);
    let g = (s.f() - phase) / r;
    let gj = Jet::var(g);
    let local = spec.keyed_to_frequency(r * g, 1.0);
    let v = integrate(|t: f64| gj * a1(Jet::constant(r), gj * (r * t) + phase).sqrt(), 0.0, 1.0, &local)?;
    let exact = b_fast(r, g, phase).sqrt();
    Ok(rel(v.d1 - exact, exact))
}

/// For `r ≤ ½`, with `Φ = ∫₀^{g(r)} B^{1/2} dy`:
/// `∂_rΦ + (2/r)Φ = A^{1/2} f_r / r + (1/r)∫₀^g B^{−1/2} dy`. The `g_r` terms
/// agree on both sides, leaving
/// `∫₀^g ∂_r B^{1/2} dy + (2/r)∫₀^g B^{1/2} dy = A^{1/2} g / r + (1/r)∫₀^g B^{−1/2} dy`
/// at `g = offset / r`, with `∂_r B = r y⁴ F̃₄(r y)` free of cancellation.
pub fn origin_gradient_identity(s: &IdentitySample, spec: &QuadratureSpec) -> Result<f64> {
    let r = s.r;
    let g = s.offset / r;
    let t = KernelTable::standard();
    let local = spec.keyed_to_frequency(r, g);
    let dr_root = integrate(|y: f64| r * y.powi(4) * t.ftilde(4, r * y) / (2.0 * b_aligned(r, y).sqrt()), 0.0, g, &local)?;
    let root = integrate(|y: f64| b_aligned(r, y).sqrt(), 0.0, g, &local)?;
    let inv = integrate(|y: f64| b_aligned(r, y).powf(-0.5), 0.0, g, &local)?;
    let a = b_aligned(r, g);
    let lhs = dr_root + 2.0 / r * root;
    let rhs = a.sqrt() * g / r + inv / r;
    let scale = dr_root.abs() + (2.0 / r * root).abs() + (a.sqrt() * g / r).abs() + (inv / r).abs();
    Ok(rel(lhs - rhs, scale))
}

struct Worst {
    value: f64,
    at: Option<IdentitySample>,
}

fn worst_of(samples: &[IdentitySample], f: impl Fn(&IdentitySample) -> Result<f64> + Sync + Send) -> Result<Worst> {
    let vals = map_nodes(samples.len(), |i| f(&samples[i]));
    let mut w = Worst { value: 0.0, at: None };
    for (i, v) in vals.into_iter().enumerate() {
        let v = v?;
        // NaN must surface as a failure.
        if !(v <= w.value) {
            w = Worst { value: v, at: Some(samples[i]) };
            if v.is_nan() {
                break;
            }
        }
    }
    Ok(w)
}

fn entry(name: &str, tag: &str, w: Worst, tol: f64) -> CheckEntry {
    let e = CheckEntry::at_most(name, tag, w.value, tol);
    match w.at {
        Some(s) => e.with_detail(format!("worst at r={}, f=N1*pi{:+}, N1={}", s.r, s.offset, s.n1)),
        None => e,
    }
}

/// Every identity over the sample set, as report entries at tolerance `tol`.
pub fn identity_report(set: &SampleSet, tol: f64, spec: &QuadratureSpec) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("identities");
    let s = &set.samples;
    let a = worst_of(s, |x| Ok(z_derivative_cancellation(x).0))?;
    rep.push(entry("z_second_derivative_cancellation", "d_zz Phi1~ = d_z Phi1~ sin(2f)/(A1 r^2)", a, 1e-10));
    let b = worst_of(s, |x| Ok(z_derivative_cancellation(x).1))?;
    rep.push(entry("mixed_derivative_cancellation", "-2 d_rho d_z Phi1~ = d_z Phi1~ 4 sin^2 f/(A1 r^3)", b, 1e-10));
    let c = worst_of(s, |x| laplacian_under_integral(x, spec))?;
    rep.push(entry("radial_laplacian_under_integral", "Delta_3,rho Phi1~ = r^-2 int (B1^-1/2 - B1^-3/2)", c, tol));
    let d = worst_of(s, |x| sin2f_integral_form(x, spec))?;
    rep.push(entry("sin2f_integral_form", "A1^-1/2 sin2f/r^2 as an integral over [N1 pi, f]", d, tol));
    let e = worst_of(s, |x| sin2_sin2f_integral_form(x, spec))?;
    rep.push(entry("sin2f_sin2f_integral_form", "A1^-1/2 sin^2 f sin2f/r^4 as an integral over [N1 pi, f]", e, tol));
    let f = worst_of(s, |x| time_derivative_identity(x, spec))?;
    rep.push(entry("time_derivative_of_phi", "d_t Phi = A^1/2 d_t g", f, tol));
    let inner = set.restricted(0.5);
    let g = worst_of(&inner.samples, |x| origin_gradient_identity(x, spec))?;
    rep.push(entry("gradient_identity_near_origin", "d_r Phi + 2 Phi/r for r <= 1/2", g, tol));
    rep.note("identity_samples", s.len());
    rep.note("identity_quadrature", format!("GL{} rel {:e} abs {:e}", spec.order, spec.rel_tol, spec.abs_tol));
    Ok(rep)
}
