//! Auxiliary closed-form and integral functions: `A₁`, `B`, `G₀…G₂`, the
//! small-radius positivity integral and the static parts of the nonlocal field `Φ`.

use std::f64::consts::PI;

use super::jet::{Jet, Real};
use super::quadrature::{integrate, integrate_split, QuadratureSpec};
use super::special::KernelTable;
use crate::error::{Error, Result};

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

/// `A₁(r, f) = 1 + 2 sin²f / r²` without argument checks.
#[inline]
pub fn a1<T: Real>(r: T, f: T) -> T {
    let s = f.sin();
    T::cst(1.0) + s.sq() * 2.0 / r.sq()
}

pub fn eval_a1(r: f64, f: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(a1(r, f))
}

/// `B(r, y)` when the phase `φ(r)` is a multiple of π: `1 + y² F̃₀(r y)`.
/// Smooth down to `r = 0`, where it tends to `1 + 2y²`.
#[inline]
pub fn b_aligned(r: f64, y: f64) -> f64 {
    1.0 + y * y * KernelTable::standard().ftilde(0, r * y)
}

/// `B(r, y) = 1 + 2 sin²(r y + φ) / r²` for a general phase.
#[inline]
pub fn b_general(r: f64, y: f64, phi_r: f64) -> f64 {
    a1(r, r * y + phi_r)
}

/// Whether `phi` is (to rounding) an integer multiple of π.
pub fn is_pi_multiple(phi: f64) -> bool {
    let k = (phi / PI).round();
    (phi - k * PI).abs() <= 8.0 * f64::EPSILON * phi.abs().max(1.0)
}

pub fn eval_b(r: f64, y: f64, phi_r: f64) -> Result<f64> {
    check_radius(r)?;
    if !y.is_finite() || !phi_r.is_finite() {
        return Err(Error::Domain(format!("non-finite arguments y={y}, phi={phi_r}")));
    }
    Ok(b_fast(r, y, phi_r))
}

#[inline]
pub(crate) fn b_fast(r: f64, y: f64, phi_r: f64) -> f64 {
    if is_pi_multiple(phi_r) {
        b_aligned(r, y)
    } else {
        b_general(r, y, phi_r)
    }
}

/// `K(B) = 3B^{3/2} + B^{-1/2} − B^{-3/2}`.
#[inline]
pub fn k_weight<T: Real>(b: T) -> T {
    let s = b.sqrt();
    let inv = T::cst(1.0) / s;
    s * b * 3.0 + inv - inv / b
}

fn spec_for(r: f64, len: f64, spec: &QuadratureSpec) -> QuadratureSpec {
    spec.keyed_to_frequency(r, len)
}

/// `G₀(r, w) = ∫₀^w B^{1/2} · 2sin²(ry)/r² dy` (phase 0).
pub fn eval_g0(r: f64, w: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radius(r)?;
    let t = KernelTable::standard();
    integrate(
        |y: f64| {
            let s = y * y * t.ftilde(0, r * y);
            (1.0 + s).sqrt() * s
        },
        0.0,
        w,
        &spec_for(r, w, spec),
    )
}

/// `G₂(r, w) = ∫₀^w B^{1/2} dy` (phase 0).
pub fn eval_g2(r: f64, w: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radius(r)?;
    integrate(|y: f64| b_aligned(r, y).sqrt(), 0.0, w, &spec_for(r, w, spec))
}

/// `G₁(r, z) = (3/2) ∫₀^z G₀(r, w) B(r, w)^{1/2} dw`, by nested quadrature.
pub fn eval_g1(r: f64, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_radius(r)?;
    let inner = spec_for(r, z, spec);
    let failure = std::cell::Cell::new(None);
    let v = integrate(
        |w: f64| match eval_g0(r, w, &inner) {
            Ok(g0) => g0 * b_aligned(r, w).sqrt(),
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        },
        0.0,
        z,
        &spec_for(r, z, spec).with_tolerances(spec.abs_tol * 10.0, spec.rel_tol),
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(1.5 * v?)
}

/// Integrand of the small-radius positivity function `F(r, β)`.
#[inline]
pub fn lemma1_integrand(r: f64, y: f64) -> f64 {
    let s2 = y.sin().powi(2);
    (r * r + 2.0 * s2).sqrt() * (0.75 - s2)
}

/// `F(β) = ∫₀^β (r² + 2sin²y)^{1/2} (3/4 − sin²y) dy`.
pub fn lemma1_f(r: f64, beta: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(r >= 0.0) || !(beta >= 0.0) {
        return Err(Error::Domain(format!("need r ≥ 0 and β ≥ 0, got r={r}, β={beta}")));
    }
    integrate_split(|y| lemma1_integrand(r, y), 0.0, beta, PI, spec)
}

/// `∫₀^π sin y (3/4 − sin²y) dy`, the per-period constant at `r = 0`.
pub fn lemma1_constant(spec: &QuadratureSpec) -> Result<f64> {
    integrate(|y: f64| y.sin() * (0.75 - y.sin().powi(2)), 0.0, PI, spec)
}

/// Static pieces of the transformation `f → Φ` for a given winding `N₁`.
#[derive(Debug, Clone, Copy)]
pub struct PhiStatics<'a> {
    pub table: &'a KernelTable,
    pub n1: u32,
    pub spec: QuadratureSpec,
}

impl<'a> PhiStatics<'a> {
    pub fn new(table: &'a KernelTable, n1: u32, spec: QuadratureSpec) -> Self {
        PhiStatics { table, n1, spec }
    }

    fn top(&self) -> f64 {
        self.n1 as f64 * PI
    }

    /// `∫₀^{N₁π} K(B₁(r, y)) dy` as a jet in `r`.
    fn k_moment(&self, r: Jet) -> Result<Jet> {
        let inv_r2 = Jet::constant(1.0) / r.sq();
        integrate_split(
            |y: f64| {
                let s2 = y.sin().powi(2);
                k_weight(inv_r2 * (2.0 * s2) + 1.0)
            },
            0.0,
            self.top(),
            PI,
            &self.spec,
        )
    }

    /// Tail `T(r) = (1/3) φ_{>1}(r) (1/r) ∫₀^{N₁π} K(B₁) dy` as a jet in `r`.
    pub fn tail_jet(&self, r: f64) -> Result<Jet> {
        check_radius(r)?;
        let rj = Jet::var(r);
        let cut = self.table.cutoffs.outer(rj);
        if self.n1 == 0 || cut == Jet::default() {
            return Ok(Jet::default());
        }
        let m = self.k_moment(rj)?;
        Ok(cut * m / rj * (1.0 / 3.0))
    }

    pub fn tail(&self, r: f64) -> Result<f64> {
        Ok(self.tail_jet(r)?.v)
    }

    /// `(1/r) ∫_{N₁π}^{φ(r)} w(B₁(r, y)) dy`; zero where `φ = N₁π`.
    fn phase_integral(&self, r: f64, w: impl Fn(f64) -> f64) -> Result<f64> {
        let phi = self.table.cutoffs.phi(self.n1, r);
        let top = self.top();
        if phi == top {
            return Ok(0.0);
        }
        let v = integrate_split(|y: f64| w(a1(r, y)), top, phi, PI, &self.spec)?;
        Ok(v / r)
    }

    /// Static part of `Φ` in the form `Φ = ∫₀^g B^{1/2} dy + offset(r)`.
    pub fn offset(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.phase_integral(r, f64::sqrt)? + self.tail(r)?)
    }

    /// Static source `S(r)` of the wave equation `□₅Φ = S − (3/2)Φ + G₃`.
    pub fn source(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let t = self.tail_jet(r)?;
        let lap5 = t.d2 + 4.0 / r * t.d1;
        let k = self.phase_integral(r, k_weight)?;
        Ok(1.5 * t.v - lap5 + 0.5 * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    const SQRT_ANTIDERIVATIVE_AT_ONE: f64 = 1.2712738985228156;

    #[test]
    fn a1_values() {
        assert_eq!(eval_a1(1.0, 0.0).unwrap(), 1.0);
        assert!((eval_a1(2.0, PI / 2.0).unwrap() - 1.5).abs() < 1e-15);
        for k in -3..=3 {
            assert!((eval_a1(0.3, k as f64 * PI).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(eval_a1(0.0, 1.0).is_err());
        assert!(eval_a1(-1.0, 1.0).is_err());
    }

    #[test]
    fn b_values() {
        assert_eq!(eval_b(0.5, 0.0, PI).unwrap(), 1.0);
        assert!((eval_b(1e-9, 1.0, 2.0 * PI).unwrap() - 3.0).abs() < 1e-12);
        assert!((eval_b(1.0, PI / 2.0, 0.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(eval_b(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn aligned_and_general_b_agree() {
        for &r in &[0.6, 0.9, 1.5] {
            for &y in &[-2.0, 0.3, 4.0] {
                let a = b_aligned(r, y);
                let b = b_general(r, y, PI);
                assert!(((a - b) / a).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn lemma_constant_is_one_sixth() {
        let c = lemma1_constant(&spec()).unwrap();
        assert!((c - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn lemma_integral_basics() {
        assert_eq!(lemma1_f(0.0, 0.0, &spec()).unwrap(), 0.0);
        // F(0, π) = sqrt2 · 1/6
        let v = lemma1_f(0.0, PI, &spec()).unwrap();
        assert!((v - 2f64.sqrt() / 6.0).abs() < 1e-12);
        assert!(lemma1_f(0.05, PI, &spec()).unwrap() >= 1.0 / 12.0);
        assert!(lemma1_f(-1.0, 1.0, &spec()).is_err());
    }

    #[test]
    fn g_functions_small_r_limit() {
        let r = 1e-7;
        assert_eq!(eval_g0(0.1, 0.0, &spec()).unwrap(), 0.0);
        assert_eq!(eval_g2(0.1, 0.0, &spec()).unwrap(), 0.0);
        let g2 = eval_g2(r, 1.0, &spec()).unwrap();
        assert!((g2 - SQRT_ANTIDERIVATIVE_AT_ONE).abs() < 1e-12);
    }

    #[test]
    fn g1_is_even() {
        for &z in &[0.7, 3.0, 11.0] {
            let a = eval_g1(0.1, z, &spec()).unwrap();
            let b = eval_g1(0.1, -z, &spec()).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs());
        }
    }

    #[test]
    fn g2_derivative_is_root_b() {
        let (r, w) = (0.3, 2.0);
        let exact = b_aligned(r, w).sqrt();
        let mut errs = Vec::new();
        for h in [1e-2, 5e-3] {
            let d = (eval_g2(r, w + h, &spec()).unwrap() - eval_g2(r, w - h, &spec()).unwrap()) / (2.0 * h);
            errs.push((d - exact).abs());
        }
        let ratio = errs[0] / errs[1];
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn statics_vanish_without_winding() {
        let t = KernelTable::standard();
        let p = PhiStatics::new(t, 0, spec());
        for &r in &[0.1, 0.7, 1.5, 3.0] {
            assert_eq!(p.offset(r).unwrap(), 0.0);
            assert_eq!(p.source(r).unwrap(), 0.0);
        }
    }

    #[test]
    fn statics_inside_half() {
        let t = KernelTable::standard();
        let p = PhiStatics::new(t, 1, spec());
        for &r in &[0.05, 0.3, 0.5] {
            assert_eq!(p.offset(r).unwrap(), 0.0);
            assert_eq!(p.source(r).unwrap(), 0.0);
        }
        assert!(p.tail(3.0).unwrap() > 0.0);
    }

    #[test]
    fn tail_jet_matches_differences() {
        let t = KernelTable::standard();
        let p = PhiStatics::new(t, 1, spec());
        let r = 0.8;
        let h = 1e-4;
        let j = p.tail_jet(r).unwrap();
        let (tp, tm, t0) = (p.tail(r + h).unwrap(), p.tail(r - h).unwrap(), p.tail(r).unwrap());
        assert!((j.d1 - (tp - tm) / (2.0 * h)).abs() < 1e-6);
        assert!((j.d2 - (tp - 2.0 * t0 + tm) / (h * h)).abs() < 1e-3);
    }
}
