//! The removable-singularity functions `F̃₀ … F̃₄`.
//!
//! Each `F̃ᵢ` is an even entire function. Near the origin it is evaluated from
//! its Taylor series in `u = x²`; further out from a closed form written to
//! keep cancellation to a couple of digits. The series coefficients are
//! generated from the expansion of each function as a short sum of
//! `c · trig(k x) / x^p` terms, so no coefficient table is hand-entered.

use serde::{Deserialize, Serialize};

use super::cutoff::Cutoffs;
use crate::error::{Error, Result};

/// Number of even-power Taylor terms kept per function.
pub const SERIES_TERMS: usize = 16;

/// Default series/closed-form switch radius.
pub const SWITCH_RADIUS: f64 = 0.5;

/// Values at the origin.
pub const FTILDE_AT_ZERO: [f64; 5] = [2.0, 4.0 / 3.0, 2.0 / 3.0, 2.0, -4.0 / 3.0];

#[derive(Clone, Copy)]
enum Trig {
    One,
    Sin,
    Cos,
}

/// `coef · trig(k x) / x^pow`.
#[derive(Clone, Copy)]
struct Monomial {
    coef: f64,
    trig: Trig,
    k: f64,
    pow: i32,
}

const fn m(coef: f64, trig: Trig, k: f64, pow: i32) -> Monomial {
    Monomial { coef, trig, k, pow }
}

/// Trig-monomial expansions of the five functions.
const EXPANSIONS: [&[Monomial]; 5] = [
    // 2 sin²x / x² = (1 − cos 2x) / x²
    &[m(1.0, Trig::One, 0.0, 2), m(-1.0, Trig::Cos, 2.0, 2)],
    // (2x − sin 2x) / x³
    &[m(2.0, Trig::One, 0.0, 2), m(-1.0, Trig::Sin, 2.0, 3)],
    // sin 2x (x² − sin²x) / x⁵
    &[
        m(1.0, Trig::Sin, 2.0, 3),
        m(-0.5, Trig::Sin, 2.0, 5),
        m(0.25, Trig::Sin, 4.0, 5),
    ],
    // sin 2x / x
    &[m(1.0, Trig::Sin, 2.0, 1)],
    // 4 sin x (x cos x − sin x) / x⁴
    &[
        m(-2.0, Trig::One, 0.0, 4),
        m(2.0, Trig::Cos, 2.0, 4),
        m(2.0, Trig::Sin, 2.0, 3),
    ],
];

/// Coefficients `c_n` with `F̃(x) = Σ c_n x^{2n}`.
fn series_coefficients(terms: &[Monomial], n_terms: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_terms];
    for t in terms {
        // Power series of trig(k x) has terms x^e with coefficient a_e.
        // Dividing by x^pow leaves x^{e − pow}; collect e − pow = 2n ≥ 0.
        for (n, slot) in out.iter_mut().enumerate() {
            let e = 2 * n as i32 + t.pow;
            let a = match t.trig {
                Trig::One => {
                    if e == 0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Trig::Sin => {
                    if e % 2 == 1 {
                        let j = (e - 1) / 2;
                        sign(j) * t.k.powi(e) / factorial(e)
                    } else {
                        0.0
                    }
                }
                Trig::Cos => {
                    if e % 2 == 0 {
                        sign(e / 2) * t.k.powi(e) / factorial(e)
                    } else {
                        0.0
                    }
                }
            };
            *slot += t.coef * a;
        }
    }
    out
}

fn sign(j: i32) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Closed forms, valid away from the origin. `x ≥ 0` expected.
fn closed_form(i: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    match i {
        0 => {
            let q = s / x;
            2.0 * q * q
        }
        1 => (2.0 * x - (2.0 * x).sin()) / (x * x * x),
        2 => {
            let x2 = x * x;
            (2.0 * x).sin() * (x - s) * (x + s) / (x2 * x2 * x)
        }
        3 => (2.0 * x).sin() / x,
        4 => {
            let x2 = x * x;
            4.0 * s * (x * c - s) / (x2 * x2)
        }
        _ => unreachable!("index checked by caller"),
    }
}

/// Immutable evaluator for `F̃₀ … F̃₄` plus the cutoff profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub switch_radius: f64,
    pub series_coeffs: [Vec<f64>; 5],
    pub cutoffs: Cutoffs,
}

impl Default for KernelTable {
    fn default() -> Self {
        KernelTable::new(SWITCH_RADIUS, SERIES_TERMS, Cutoffs::default())
    }
}

impl KernelTable {
    pub fn new(switch_radius: f64, n_terms: usize, cutoffs: Cutoffs) -> Self {
        let series_coeffs = std::array::from_fn(|i| series_coefficients(EXPANSIONS[i], n_terms));
        KernelTable {
            switch_radius,
            series_coeffs,
            cutoffs,
        }
    }

    /// Shared default table.
    pub fn standard() -> &'static KernelTable {
        static TABLE: std::sync::OnceLock<KernelTable> = std::sync::OnceLock::new();
        TABLE.get_or_init(KernelTable::default)
    }

    /// Taylor evaluation (any `x`, accurate for small `|x|`).
    #[inline]
    pub fn series(&self, i: usize, x: f64) -> f64 {
        let u = x * x;
        self.series_coeffs[i].iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Closed-form evaluation at `|x|`; loses accuracy near 0.
    #[inline]
    pub fn closed(&self, i: usize, x: f64) -> f64 {
        closed_form(i, x.abs())
    }

    /// `F̃ᵢ(x)` for a valid index and finite `x`.
    #[inline]
    pub fn ftilde(&self, i: usize, x: f64) -> f64 {
        let ax = x.abs();
        if ax < self.switch_radius {
            self.series(i, ax)
        } else {
            closed_form(i, ax)
        }
    }

    /// Checked `F̃ᵢ(x)`.
    pub fn eval_ftilde(&self, i: usize, x: f64) -> Result<f64> {
        if i > 4 {
            return Err(Error::Domain(format!("function index {i} outside 0..=4")));
        }
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite argument {x}")));
        }
        Ok(self.ftilde(i, x))
    }
}

/// `F̃ᵢ(x)` via the shared table.
pub fn eval_ftilde(i: usize, x: f64) -> Result<f64> {
    KernelTable::standard().eval_ftilde(i, x)
}
