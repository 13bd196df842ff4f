//! Smooth compactly supported initial data.

use serde::{Deserialize, Serialize};

use crate::kernel::cutoff::smooth_step;

/// `a · exp(−(r − r_c)²/σ²) · bump(r)`, the bump falling from 1 to 0 over
/// `[r_c + 4σ, r_c + 6σ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProfile {
    pub a: f64,
    pub rc: f64,
    pub sigma: f64,
}

impl GaussianProfile {
    pub const ZERO: GaussianProfile = GaussianProfile { a: 0.0, rc: 0.0, sigma: 1.0 };

    pub fn new(a: f64, rc: f64, sigma: f64) -> Self {
        GaussianProfile { a, rc, sigma }
    }

    pub fn eval(&self, r: f64) -> f64 {
        if self.a == 0.0 {
            return 0.0;
        }
        let z = (r - self.rc) / self.sigma;
        let cut = 1.0 - smooth_step((z - 4.0) / 2.0);
        self.a * (-z * z).exp() * cut
    }

    /// Outermost radius where the profile is non-zero.
    pub fn support(&self) -> f64 {
        if self.a == 0.0 {
            0.0
        } else {
            self.rc + 6.0 * self.sigma
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub g0: GaussianProfile,
    pub g1: GaussianProfile,
}

impl InitialData {
    pub fn zero() -> Self {
        InitialData { g0: GaussianProfile::ZERO, g1: GaussianProfile::ZERO }
    }

    /// `g₀ = a e^{−(r−r_c)²/σ²}`, `g₁ = 0`.
    pub fn gaussian(a: f64, rc: f64, sigma: f64) -> Self {
        InitialData { g0: GaussianProfile::new(a, rc, sigma), g1: GaussianProfile::ZERO }
    }

    pub fn support(&self) -> f64 {
        self.g0.support().max(self.g1.support())
    }
}
