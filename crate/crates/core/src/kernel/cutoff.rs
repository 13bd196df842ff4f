//! Smooth C∞ cutoff profiles built from the `exp(-1/t)` transition.

use serde::{Deserialize, Serialize};

use super::jet::Real;

/// `q(t) = exp(-1/t)` for `t > 0`, zero otherwise. Below `1/700` the value
/// underflows anyway, so it is returned as an exact zero constant.
#[inline]
fn q<T: Real>(t: T) -> Option<T> {
    if t.value() <= 1.0 / 700.0 {
        None
    } else {
        Some((-(T::cst(1.0) / t)).exp())
    }
}

/// Smooth step `s(t) = q(t) / (q(t) + q(1 - t))`: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step<T: Real>(t: T) -> T {
    match (q(t), q(T::cst(1.0) - t)) {
        (None, _) => T::cst(0.0),
        (Some(_), None) => T::cst(1.0),
        (Some(a), Some(b)) => a / (a + b),
    }
}

/// Step rising from 0 at `a` to 1 at `b`.
#[inline]
pub fn rise<T: Real>(r: T, a: f64, b: f64) -> T {
    smooth_step((r + (-a)) * (1.0 / (b - a)))
}

/// Transition intervals of the cutoff family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoffs {
    /// `φ` falls from `N₁π` to 0 over `[phi_start, phi_end]`.
    pub phi_start: f64,
    pub phi_end: f64,
    /// `φ_{<1}` falls from 1 to 0 over `[inner_start, inner_end]`.
    pub inner_start: f64,
    pub inner_end: f64,
    /// `φ_{≳1}` rises from 0 to 1 over `[far_start, far_end]`.
    pub far_start: f64,
    pub far_end: f64,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs {
            phi_start: 1.0,
            phi_end: 2.0,
            inner_start: 0.5,
            inner_end: 1.0,
            far_start: 1.0,
            far_end: 2.0,
        }
    }
}

impl Cutoffs {
    /// Background profile `φ(r)`: `N₁π` near the origin, 0 beyond `phi_end`.
    pub fn phi<T: Real>(&self, n1: u32, r: T) -> T {
        let s = rise(r, self.phi_start, self.phi_end);
        (T::cst(1.0) - s) * (n1 as f64 * std::f64::consts::PI)
    }

    /// `φ_{<1}`.
    pub fn inner<T: Real>(&self, r: T) -> T {
        T::cst(1.0) - rise(r, self.inner_start, self.inner_end)
    }

    /// `φ_{>1} = 1 − φ_{<1}`.
    pub fn outer<T: Real>(&self, r: T) -> T {
        rise(r, self.inner_start, self.inner_end)
    }

    /// `φ_{≳1}`: vanishes for `r ≤ far_start`.
    pub fn far<T: Real>(&self, r: T) -> T {
        rise(r, self.far_start, self.far_end)
    }

    /// `φ_{<r₀}(r) = ψ(r / r₀)` with `ψ` the profile of `φ_{<1}`.
    pub fn below<T: Real>(&self, r0: f64, r: T) -> T {
        self.inner(r * (1.0 / r0))
    }

    /// Largest radius where `φ`, `φ_{>1}` or `φ_{≳1}` still vary.
    pub fn support_end(&self) -> f64 {
        self.phi_end.max(self.inner_end).max(self.far_end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::jet::Jet;
    use std::f64::consts::PI;

    #[test]
    fn plateaus_are_exact() {
        let c = Cutoffs::default();
        for &r in &[1e-6, 0.2, 0.5, 0.9, 1.0] {
            assert_eq!(c.phi(2, r), 2.0 * PI);
            assert_eq!(c.far(r), 0.0);
        }
        for &r in &[2.0, 3.0, 100.0] {
            assert_eq!(c.phi(2, r), 0.0);
            assert_eq!(c.far(r), 1.0);
        }
        for &r in &[0.01, 0.5] {
            assert_eq!(c.inner(r), 1.0);
            assert_eq!(c.outer(r), 0.0);
        }
        for &r in &[1.0, 7.0] {
            assert_eq!(c.inner(r), 0.0);
            assert_eq!(c.outer(r), 1.0);
        }
    }

    #[test]
    fn transitions_are_monotone_and_bounded() {
        let c = Cutoffs::default();
        let mut prev = 1.0;
        for k in 0..=1000 {
            let r = 0.4 + 0.7 * k as f64 / 1000.0;
            let v = c.inner(r);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev);
            prev = v;
        }
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn jet_derivatives_match_differences() {
        let c = Cutoffs::default();
        let h = 1e-4;
        for &r in &[1.2, 1.5, 1.8] {
            let j = c.phi(1, Jet::var(r));
            let d1 = (c.phi(1, r + h) - c.phi(1, r - h)) / (2.0 * h);
            let d2 = (c.phi(1, r + h) - 2.0 * c.phi(1, r) + c.phi(1, r - h)) / (h * h);
            assert!((j.d1 - d1).abs() < 1e-6);
            assert!((j.d2 - d2).abs() < 1e-4);
        }
        let flat = c.phi(1, Jet::var(0.7));
        assert_eq!((flat.d1, flat.d2), (0.0, 0.0));
    }
}
