//! Second-order forward-mode jets.
//!
//! A [`Jet`] carries `(v, v', v'')` of a scalar function of one variable and
//! propagates them exactly through arithmetic and the elementary functions the
//! kernels need. Kernel code that must be differentiated is written once over
//! the [`Real`] trait and evaluated either on `f64` or on `Jet`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal scalar interface shared by `f64` and [`Jet`].
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn cst(c: f64) -> Self;
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    /// `self^p` for real `p`; requires a positive value.
    fn powf(self, p: f64) -> Self;

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }

    fn sq(self) -> Self {
        self * self
    }

    /// Reflect through zero when the value is negative.
    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Real for f64 {
    #[inline]
    fn cst(c: f64) -> Self {
        c
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Truncated Taylor jet `v + d1 ε + d2 ε²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }

    /// The independent variable at `x`.
    pub const fn var(x: f64) -> Self {
        Jet { v: x, d1: 1.0, d2: 0.0 }
    }

    pub const fn constant(c: f64) -> Self {
        Jet { v: c, d1: 0.0, d2: 0.0 }
    }

    /// Compose with a scalar function given its value and first two derivatives at `self.v`.
    #[inline]
    fn chain(self, f: f64, fp: f64, fpp: f64) -> Self {
        Jet {
            v: f,
            d1: fp * self.d1,
            d2: fpp * self.d1 * self.d1 + fp * self.d2,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, o: Jet) -> Jet {
        let inv = 1.0 / o.v;
        let recip = o.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
        self * recip
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, c: f64) -> Jet {
        Jet::new(self.v + c, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, c: f64) -> Jet {
        Jet::new(self.v - c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, c: f64) -> Jet {
        Jet::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

impl Real for Jet {
    fn cst(c: f64) -> Self {
        Jet::constant(c)
    }
    fn value(self) -> f64 {
        self.v
    }
    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn powf(self, p: f64) -> Self {
        let f = self.v.powf(p);
        self.chain(f, p * f / self.v, p * (p - 1.0) * f / (self.v * self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd2(f: impl Fn(f64) -> f64, x: f64) -> (f64, f64) {
        let h = 1e-4;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn jet_matches_finite_differences() {
        let f = |x: Jet| (x.sin() * x.sqrt() + (x * 0.3).exp()) / (x.cos() + 2.0) + x.powf(1.5);
        let fs = |x: f64| (x.sin() * x.sqrt() + (0.3 * x).exp()) / (x.cos() + 2.0) + x.powf(1.5);
        for &x in &[0.3, 1.1, 2.7] {
            let j = f(Jet::var(x));
            let (d1, d2) = fd2(fs, x);
            assert!((j.v - fs(x)).abs() < 1e-14);
            assert!((j.d1 - d1).abs() < 1e-7, "{} vs {}", j.d1, d1);
            assert!((j.d2 - d2).abs() < 1e-5, "{} vs {}", j.d2, d2);
        }
    }

    #[test]
    fn division_by_jet() {
        let x = Jet::var(2.0);
        let q = Jet::constant(1.0) / x;
        assert_eq!(q.v, 0.5);
        assert!((q.d1 + 0.25).abs() < 1e-15);
        assert!((q.d2 - 0.25).abs() < 1e-15);
    }
}
