//! Semi-discrete right-hand sides `g̈ = F(g, ġ)`.

use super::model::{face_mean, face_mean_da, inner_bracket, n_term, wave_map_bracket, Background, InnerBranch, ModelParams, Scheme};
use crate::error::{Error, Result};
use crate::grid::reduce::map_nodes;
use crate::grid::{derivative_at, laplacian_at, OuterClosure, Parity, RadialGrid};
use crate::kernel::special::KernelTable;

const EVEN: Parity = Parity::Even;
const ZERO: OuterClosure = OuterClosure::Zero;

/// `g_r` at node `j` with the even ghost and zero exterior.
#[inline]
pub fn g_r(g: &[f64], grid: &RadialGrid, j: usize) -> f64 {
    derivative_at(g, grid, j, EVEN, ZERO)
}

/// Pointwise central-difference form of the regularised equation.
pub fn accel_direct(params: &ModelParams, grid: &RadialGrid, bg: &Background, g: &[f64], gt: &[f64]) -> Vec<f64> {
    let t = KernelTable::standard();
    map_nodes(grid.n(), |j| {
        let r = bg.r[j];
        let gj = g[j];
        let gr = g_r(g, grid, j);
        let mut acc = laplacian_at(g, grid, j, EVEN, ZERO) + bg.lap3_phi[j] / r;
        let wi = bg.inner[j];
        if wi > 0.0 {
            acc += wi
                * match params.inner {
                    InnerBranch::Skyrme => inner_bracket(t, r, gj, gt[j], gr),
                    InnerBranch::WaveMap => wave_map_bracket(t, r, gj),
                };
        }
        let wo = bg.outer[j];
        if wo > 0.0 {
            let tr = bg.trig(j, gj);
            let f_r = bg.dphi[j] + gj + r * gr;
            acc += wo * (2.0 * gj / (r * r) + n_term(r, &tr, f_r, r * gt[j]) / r);
        }
        acc
    })
}

/// Euler–Lagrange equations of the discrete Hamiltonian
/// `Σ_j V_j(½A_j ġ_j² + W_j) + Σ_k ½ h r_k⁴ Ā_k D_k²`
/// with `D_k = (g_k − g_{k−1})/h` on faces `r_k = k h`, `Ā_k` the face
/// average of `A`, and `g = 0`, `A = 1` beyond the last node.
pub fn accel_conservative(grid: &RadialGrid, bg: &Background, g: &[f64], gt: &[f64]) -> Vec<f64> {
    let t = KernelTable::standard();
    let n = grid.n();
    let h = grid.h();
    let a: Vec<f64> = map_nodes(n, |j| bg.a(t, j, g[j]));
    map_nodes(n, |j| {
        let gj = g[j];
        let a_j = a[j];
        let da = bg.da(t, j, gj);
        let (g_next, a_next) = if j + 1 < n { (g[j + 1], a[j + 1]) } else { (0.0, 1.0) };
        let d_out = (g_next - gj) / h;
        let flux_out = bg.face_r4[j + 1] * face_mean(a_j, a_next) * d_out;
        let pull_out = bg.face_r4[j + 1] * face_mean_da(a_j, a_next) * d_out * d_out;
        let (flux_in, pull_in) = if j == 0 {
            (0.0, 0.0)
        } else {
            let d_in = (gj - g[j - 1]) / h;
            (
                bg.face_r4[j] * face_mean(a[j - 1], a_j) * d_in,
                bg.face_r4[j] * face_mean_da(a_j, a[j - 1]) * d_in * d_in,
            )
        };
        let v = bg.volume[j];
        let num = flux_out - flux_in - 0.5 * h * da * (pull_in + pull_out) - v * bg.dw(t, j, gj) - 0.5 * v * da * gt[j] * gt[j];
        num / (v * a_j)
    })
}

/// `g̈` for the configured scheme; non-finite output is reported with its location.
pub fn accel(params: &ModelParams, grid: &RadialGrid, bg: &Background, g: &[f64], gt: &[f64]) -> Result<Vec<f64>> {
    let out = match params.scheme {
        Scheme::Direct => accel_direct(params, grid, bg, g, gt),
        Scheme::Conservative => accel_conservative(grid, bg, g, gt),
    };
    if let Some(index) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::BlowupSuspected { index, r: grid.r(index) });
    }
    Ok(out)
}

/// The same acceleration assembled two ways on `lo ≤ r < hi`:
/// the near form `Δ₅g + bracket(g, ġ, g_r)` and the far form
/// `(Δ₃f + N(r, f, f_r))/r` with `f = φ + r g` differenced directly.
pub fn overlap_assemblies(
    grid: &RadialGrid,
    bg: &Background,
    g: &[f64],
    gt: &[f64],
    lo: f64,
    hi: f64,
) -> Result<(Vec<usize>, Vec<f64>, Vec<f64>)> {
    let t = KernelTable::standard();
    let lo = lo.max(2.0 * grid.h());
    let idx: Vec<usize> = grid.index_range(lo, hi).filter(|&j| j + 1 < grid.n()).collect();
    let grid3 = grid.with_dimension(3)?;
    let f: Vec<f64> = (0..grid.n()).map(|j| bg.f(j, g[j])).collect();
    let mut near = Vec::with_capacity(idx.len());
    let mut far = Vec::with_capacity(idx.len());
    for &j in &idx {
        let r = bg.r[j];
        let gr = g_r(g, grid, j);
        near.push(laplacian_at(g, grid, j, EVEN, ZERO) + inner_bracket(t, r, g[j], gt[j], gr) + bg.lap3_phi[j] / r);
        // Interior nodes only, so the parity flag of f is never consulted.
        let lap3 = laplacian_at(&f, &grid3, j, EVEN, ZERO);
        let f_r = (f[j + 1] - f[j - 1]) / (2.0 * grid.h());
        let tr = bg.trig(j, g[j]);
        far.push((lap3 + n_term(r, &tr, f_r, r * gt[j])) / r);
    }
    Ok((idx, near, far))
}
