//! Pointwise physics on a fixed grid: the static background `φ` and the
//! coefficient functions of the hedgehog equation written in terms of `g`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::grid::RadialGrid;
use crate::kernel::jet::Jet;
use crate::kernel::quadrature::{integrate, QuadratureSpec};
use crate::kernel::special::KernelTable;
use crate::error::Result;

/// Spatial discretisation of the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Variational scheme derived from a discrete Hamiltonian; conserves the
    /// discrete energy exactly in the semi-discrete limit.
    #[default]
    Conservative,
    /// Pointwise central differences of the regularised g-equation.
    Direct,
}

/// Which equation the inner region `r < 1` follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InnerBranch {
    #[default]
    Skyrme,
    /// Drop the Skyrme correction inside `r < 1`, leaving the wave-map
    /// nonlinearity `F̃₁(rg) g³`. Only meaningful with [`Scheme::Direct`].
    WaveMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Winding number: `f(0) = N₁π`.
    pub n1: u32,
    pub scheme: Scheme,
    pub inner: InnerBranch,
}

impl ModelParams {
    pub fn skyrme(n1: u32) -> Self {
        ModelParams { n1, scheme: Scheme::Conservative, inner: InnerBranch::Skyrme }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }
}

/// Trigonometric data of `f = φ + r g` at one node.
#[derive(Debug, Clone, Copy)]
pub struct Trig {
    pub sin_f: f64,
    pub sin_2f: f64,
    pub sin_sq: f64,
}

/// Static per-node data for a grid and winding number.
#[derive(Debug, Clone)]
pub struct Background {
    pub n1: u32,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub ddphi: Vec<f64>,
    /// `Δ₃φ = φ'' + 2φ'/r`.
    pub lap3_phi: Vec<f64>,
    /// `φ_{<1}` and `φ_{>1}`.
    pub inner: Vec<f64>,
    pub outer: Vec<f64>,
    /// `φ(r) = N₁π` exactly at this node, so `f` reduces to `N₁π + r g`.
    pub aligned: Vec<bool>,
    /// `∫_{jh}^{(j+1)h} r⁴ dr`.
    pub volume: Vec<f64>,
    /// `(k h)⁴` for faces `k = 0..=n`.
    pub face_r4: Vec<f64>,
    /// Potential density at `g = 0`.
    pub w0: Vec<f64>,
    pub h: f64,
}

impl Background {
    pub fn new(grid: &RadialGrid, n1: u32, table: &KernelTable) -> Self {
        let c = &table.cutoffs;
        let n = grid.n();
        let h = grid.h();
        let mut bg = Background {
            n1,
            r: grid.nodes(),
            phi: Vec::with_capacity(n),
            dphi: Vec::with_capacity(n),
            ddphi: Vec::with_capacity(n),
            lap3_phi: Vec::with_capacity(n),
            inner: Vec::with_capacity(n),
            outer: Vec::with_capacity(n),
            aligned: Vec::with_capacity(n),
            volume: Vec::with_capacity(n),
            face_r4: (0..=n).map(|k| (k as f64 * h).powi(4)).collect(),
            w0: Vec::with_capacity(n),
            h,
        };
        for j in 0..n {
            let r = grid.r(j);
            let p = c.phi(n1, Jet::var(r));
            bg.phi.push(p.v);
            bg.dphi.push(p.d1);
            bg.ddphi.push(p.d2);
            bg.lap3_phi.push(p.d2 + 2.0 * p.d1 / r);
            bg.inner.push(c.inner(r));
            bg.outer.push(c.outer(r));
            bg.aligned.push(r <= c.phi_start);
            let jf = j as f64;
            bg.volume.push(
                h.powi(5) / 5.0 * (5.0 * jf.powi(4) + 10.0 * jf.powi(3) + 10.0 * jf * jf + 5.0 * jf + 1.0),
            );
            let s = p.v.sin();
            let a1 = 1.0 + 2.0 * s * s / (r * r);
            let w0 = (0.5 * a1 * r * r * p.d1 * p.d1 + s * s + s.powi(4) / (2.0 * r * r)) / r.powi(4);
            bg.w0.push(if n1 == 0 || r <= c.phi_start { 0.0 } else { w0 });
        }
        bg
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `f = φ + r g`.
    #[inline]
    pub fn f(&self, j: usize, g: f64) -> f64 {
        self.phi[j] + self.r[j] * g
    }

    #[inline]
    pub fn trig(&self, j: usize, g: f64) -> Trig {
        if self.aligned[j] {
            let x = self.r[j] * g;
            let s = x.sin();
            let sign = if self.n1 % 2 == 0 { 1.0 } else { -1.0 };
            Trig { sin_f: sign * s, sin_2f: (2.0 * x).sin(), sin_sq: s * s }
        } else {
            let f = self.f(j, g);
            let s = f.sin();
            Trig { sin_f: s, sin_2f: (2.0 * f).sin(), sin_sq: s * s }
        }
    }

    /// `A = 1 + 2 sin²f / r²`.
    #[inline]
    pub fn a(&self, t: &KernelTable, j: usize, g: f64) -> f64 {
        let r = self.r[j];
        if self.aligned[j] {
            1.0 + g * g * t.ftilde(0, r * g)
        } else {
            let s = (self.f(j, g)).sin();
            1.0 + 2.0 * s * s / (r * r)
        }
    }

    /// `∂_g A = 2 sin 2f / r`.
    #[inline]
    pub fn da(&self, t: &KernelTable, j: usize, g: f64) -> f64 {
        let r = self.r[j];
        if self.aligned[j] {
            2.0 * g * t.ftilde(3, r * g)
        } else {
            2.0 * (2.0 * self.f(j, g)).sin() / r
        }
    }

    /// `∂_g W`, derivative of the potential density per unit `r⁴ dr`.
    #[inline]
    pub fn dw(&self, t: &KernelTable, j: usize, g: f64) -> f64 {
        let r = self.r[j];
        if self.aligned[j] {
            let x = r * g;
            let g3 = g * g * g;
            -(t.ftilde(1, x) * g3 + t.ftilde(2, x) * g3 * g * g)
        } else {
            let tr = self.trig(j, g);
            let p = self.dphi[j] + g;
            let a = 1.0 + 2.0 * tr.sin_sq / (r * r);
            let du = -r * tr.sin_2f * p * p - 2.0 * r * r * p - a * r.powi(3) * self.ddphi[j]
                + r * tr.sin_2f
                + tr.sin_sq * tr.sin_2f / r;
            du / r.powi(4)
        }
    }

    /// `W(r_j, g) = W(r_j, 0) + ∫₀^g ∂_g W ds`.
    pub fn w(&self, t: &KernelTable, j: usize, g: f64, spec: &QuadratureSpec) -> Result<f64> {
        if g == 0.0 {
            return Ok(self.w0[j]);
        }
        let i = integrate(|s| self.dw(t, j, s), 0.0, g, spec)?;
        Ok(self.w0[j] + i)
    }
}

/// Right-hand side `N(r, f, f')` of `□₃ f = N`.
#[inline]
pub fn n_term(r: f64, tr: &Trig, f_r: f64, f_t: f64) -> f64 {
    let r2 = r * r;
    let a1 = 1.0 + 2.0 * tr.sin_sq / r2;
    -(4.0 * tr.sin_sq / (r2 * r) * f_r + tr.sin_2f / r2 * (f_t * f_t - f_r * f_r) + tr.sin_2f / r2
        + tr.sin_sq * tr.sin_2f / (r2 * r2))
        / a1
}

/// Bracket of the inner region: `(F̃₁g³ + F̃₂g⁵ − F̃₃g(g_t² − g_r²) + F̃₄g⁴ r g_r) / (1 + F̃₀g²)`.
#[inline]
pub fn inner_bracket(t: &KernelTable, r: f64, g: f64, gt: f64, gr: f64) -> f64 {
    let x = r * g;
    let g2 = g * g;
    let num = t.ftilde(1, x) * g2 * g + t.ftilde(2, x) * g2 * g2 * g - t.ftilde(3, x) * g * (gt * gt - gr * gr)
        + t.ftilde(4, x) * g2 * g2 * r * gr;
    num / (1.0 + t.ftilde(0, x) * g2)
}

/// Wave-map replacement of [`inner_bracket`].
#[inline]
pub fn wave_map_bracket(t: &KernelTable, r: f64, g: f64) -> f64 {
    t.ftilde(1, r * g) * g * g * g
}

/// `N₁π`.
pub fn winding_value(n1: u32) -> f64 {
    n1 as f64 * PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::auxiliary::eval_a1;

    fn setup(n1: u32) -> (RadialGrid, Background) {
        let grid = RadialGrid::new(400, 4.0, 5).unwrap();
        let bg = Background::new(&grid, n1, KernelTable::standard());
        (grid, bg)
    }

    #[test]
    fn denominator_is_a1_inside_half() {
        let (grid, bg) = setup(1);
        let t = KernelTable::standard();
        for j in grid.index_range(0.0, 0.5) {
            for &g in &[-3.0, -0.2, 0.7, 5.0] {
                let r = grid.r(j);
                let den = 1.0 + t.ftilde(0, r * g) * g * g;
                let a1 = eval_a1(r, bg.f(j, g)).unwrap();
                assert!((den - a1).abs() <= 1e-12 * a1);
                assert!((bg.a(t, j, g) - a1).abs() <= 1e-12 * a1);
            }
        }
    }

    #[test]
    fn inner_bracket_equals_far_terms() {
        // (2/r²)g + N(r, f, f')/r with f = N₁π + rg, f' = g + r g_r.
        let (grid, bg) = setup(2);
        let t = KernelTable::standard();
        for j in grid.index_range(0.3, 1.0) {
            let r = grid.r(j);
            for &(g, gt, gr) in &[(0.4, 0.3, -0.2), (-1.5, 2.0, 0.7), (3.0, -0.5, 1.1)] {
                let tr = bg.trig(j, g);
                let far = 2.0 * g / (r * r) + n_term(r, &tr, g + r * gr, r * gt) / r;
                let near = inner_bracket(t, r, g, gt, gr);
                assert!((far - near).abs() <= 1e-9 * (1.0 + near.abs()), "r={r} {far} {near}");
            }
        }
    }

    #[test]
    fn potential_force_forms_agree() {
        // Aligned (series) and general forms of ∂_g W on r ≤ 1.
        let (grid, mut bg) = setup(1);
        let t = KernelTable::standard();
        let js: Vec<usize> = grid.index_range(0.6, 1.0).collect();
        let aligned: Vec<f64> = js.iter().map(|&j| bg.dw(t, j, 0.9)).collect();
        for &j in &js {
            bg.aligned[j] = false;
        }
        for (k, &j) in js.iter().enumerate() {
            let general = bg.dw(t, j, 0.9);
            assert!((general - aligned[k]).abs() < 1e-11 * (1.0 + general.abs()));
        }
    }

    #[test]
    fn background_profile() {
        let (grid, bg) = setup(1);
        for j in 0..grid.n() {
            let r = grid.r(j);
            if r <= 1.0 {
                assert_eq!(bg.phi[j], PI);
                assert_eq!(bg.w0[j], 0.0);
            }
            if r >= 2.0 {
                assert_eq!(bg.phi[j], 0.0);
                assert_eq!(bg.lap3_phi[j], 0.0);
                assert_eq!(bg.w0[j], 0.0);
            }
        }
        let vol: f64 = bg.volume.iter().sum();
        assert!((vol - 4f64.powi(5) / 5.0).abs() < 1e-9);
    }
}

/// Face value of `A` between two nodes.
#[inline]
pub fn face_mean(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

/// `∂/∂a` of [`face_mean`]`(a, b)`.
#[inline]
pub fn face_mean_da(_a: f64, _b: f64) -> f64 {
    0.5
}
