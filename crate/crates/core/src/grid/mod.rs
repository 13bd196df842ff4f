//! Cell-centred radial grids, parity-aware stencils and diagnostic norms.

pub mod reduce;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use reduce::{map_nodes, max_by, sum_by};

/// Uniform radial mesh with nodes `r_j = (j + ½) h`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    n: usize,
    h: f64,
    r_max: f64,
    d: u32,
}

impl RadialGrid {
    /// The stored outer radius is `h · n` with `h = r_max / n`, so the two
    /// always agree exactly.
    pub fn new(n: usize, r_max: f64, d: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::Domain(format!("grid needs at least 4 nodes, got {n}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::Domain(format!("outer radius must be positive, got {r_max}")));
        }
        if d != 3 && d != 5 {
            return Err(Error::Domain(format!("dimension must be 3 or 5, got {d}")));
        }
        let h = r_max / n as f64;
        Ok(RadialGrid { n, h, r_max: h * n as f64, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn dim(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.r(j)).collect()
    }

    /// Same nodes, different ambient dimension.
    pub fn with_dimension(&self, d: u32) -> Result<Self> {
        RadialGrid::new(self.n, self.r_max, d)
    }

    /// Grid with half the spacing over the same interval.
    pub fn refined(&self) -> Self {
        RadialGrid::new(2 * self.n, self.r_max, self.d).expect("refinement of a valid grid")
    }

    /// Surface area of the unit sphere `S^{d−1}`.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.d)
    }

    /// Node index range with `a ≤ r_j < b`.
    pub fn index_range(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let lo = ((a / self.h - 0.5).ceil().max(0.0) as usize).min(self.n);
        let hi = ((b / self.h - 0.5).ceil().max(0.0) as usize).min(self.n);
        lo..hi.max(lo)
    }
}

pub fn sphere_area(d: u32) -> f64 {
    match d {
        3 => 4.0 * PI,
        5 => 8.0 * PI * PI / 3.0,
        _ => panic!("unsupported dimension {d}"),
    }
}

/// Behaviour of the smooth radial extension under `r → −r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// How the value beyond the last node is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterClosure {
    /// Quadratic extrapolation from the last three nodes.
    Extrapolate,
    /// The field vanishes beyond `R`.
    Zero,
}

/// Samples on a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub values: Vec<f64>,
    pub parity: Option<Parity>,
}

impl Field {
    pub fn even(values: Vec<f64>) -> Self {
        Field { values, parity: Some(Parity::Even) }
    }

    pub fn odd(values: Vec<f64>) -> Self {
        Field { values, parity: Some(Parity::Odd) }
    }

    pub fn unset(values: Vec<f64>) -> Self {
        Field { values, parity: None }
    }

    pub fn zeros(n: usize) -> Self {
        Field::even(vec![0.0; n])
    }

    /// Sample `f(r_j)` with the given parity.
    pub fn sample(grid: &RadialGrid, parity: Parity, f: impl Fn(f64) -> f64 + Sync + Send) -> Self {
        Field { values: map_nodes(grid.n(), |j| f(grid.r(j))), parity: Some(parity) }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn checked(&self, grid: &RadialGrid) -> Result<Parity> {
        if self.values.len() != grid.n() {
            return Err(Error::Contract(format!(
                "field has {} samples, grid has {} nodes",
                self.values.len(),
                grid.n()
            )));
        }
        self.parity
            .ok_or_else(|| Error::Contract("field parity is unset".into()))
    }
}

/// Value at index `j ∈ [−1, n]` using the parity ghost and outer closure.
#[inline]
pub fn ghost(v: &[f64], j: isize, parity: Parity, closure: OuterClosure) -> f64 {
    let n = v.len() as isize;
    if j < 0 {
        parity.sign() * v[(-j - 1) as usize]
    } else if j >= n {
        match closure {
            OuterClosure::Zero => 0.0,
            OuterClosure::Extrapolate => {
                let m = v.len();
                3.0 * v[m - 1] - 3.0 * v[m - 2] + v[m - 3]
            }
        }
    } else {
        v[j as usize]
    }
}

/// `Δ_d v` at node `j` with `d` taken from the grid.
#[inline]
pub fn laplacian_at(v: &[f64], grid: &RadialGrid, j: usize, parity: Parity, closure: OuterClosure) -> f64 {
    let h = grid.h();
    let ji = j as isize;
    let fm = ghost(v, ji - 1, parity, closure);
    let fp = ghost(v, ji + 1, parity, closure);
    let f0 = v[j];
    (fp - 2.0 * f0 + fm) / (h * h) + (grid.dim() as f64 - 1.0) / grid.r(j) * (fp - fm) / (2.0 * h)
}

/// Radial derivative at node `j`: central inside, one-sided at the last node
/// when the closure extrapolates.
#[inline]
pub fn derivative_at(v: &[f64], grid: &RadialGrid, j: usize, parity: Parity, closure: OuterClosure) -> f64 {
    let h = grid.h();
    let n = v.len();
    if j + 1 == n && closure == OuterClosure::Extrapolate {
        return (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    }
    let ji = j as isize;
    (ghost(v, ji + 1, parity, closure) - ghost(v, ji - 1, parity, closure)) / (2.0 * h)
}

/// Second-order `Δ_d f` with parity ghosts at the origin and extrapolation at `R`.
pub fn laplacian(f: &Field, grid: &RadialGrid) -> Result<Field> {
    laplacian_with(f, grid, OuterClosure::Extrapolate)
}

pub fn laplacian_with(f: &Field, grid: &RadialGrid, closure: OuterClosure) -> Result<Field> {
    let p = f.checked(grid)?;
    let v = &f.values;
    Ok(Field { values: map_nodes(grid.n(), |j| laplacian_at(v, grid, j, p, closure)), parity: Some(p) })
}

/// `∂_r f`; the derivative of an even field is odd and vice versa.
pub fn gradient(f: &Field, grid: &RadialGrid) -> Result<Field> {
    let p = f.checked(grid)?;
    let v = &f.values;
    let out = map_nodes(grid.n(), |j| derivative_at(v, grid, j, p, OuterClosure::Extrapolate));
    let q = match p {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    };
    Ok(Field { values: out, parity: Some(q) })
}

/// `ω_{d−1} Σ v_j² r_j^{d−1} h`, the squared discrete L² norm.
pub fn l2_squared(v: &[f64], grid: &RadialGrid) -> f64 {
    let dm1 = grid.dim() as i32 - 1;
    grid.sphere_area() * grid.h() * sum_by(0, v.len(), &|j| v[j] * v[j] * grid.r(j).powi(dm1))
}

pub fn norm_l2(f: &Field, grid: &RadialGrid) -> Result<f64> {
    if f.values.len() != grid.n() {
        return Err(Error::Contract("field length does not match grid".into()));
    }
    Ok(l2_squared(&f.values, grid).sqrt())
}

/// `(‖f‖² + ‖∂_r f‖²)^{1/2}` with central-difference gradient.
pub fn norm_h1(f: &Field, grid: &RadialGrid) -> Result<f64> {
    let df = gradient(f, grid)?;
    Ok((l2_squared(&f.values, grid) + l2_squared(&df.values, grid)).sqrt())
}

/// Japanese bracket `⟨r⟩ = (1 + r²)^{1/2}`.
#[inline]
pub fn bracket(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}

/// `max_j w(r_j) |v_j|`.
pub fn weighted_sup(f: &Field, grid: &RadialGrid, weight: impl Fn(f64) -> f64 + Sync + Send) -> f64 {
    if f.values.is_empty() {
        return 0.0;
    }
    max_by(f.values.len(), |j| weight(grid.r(j)) * f.values[j].abs())
}

/// Integrals of the continuous piecewise-linear interpolant `p` of the
/// samples: `p` is constant on `[0, r_0]`, linear between nodes and falls
/// linearly to zero at `R`. Returns `(∫ p² r^{d−3} dr, ∫ p'² r^{d−1} dr)`.
///
/// Since `p` is an honest `H¹` function, these obey the continuum Hardy
/// inequality exactly, so discrete ratios can never overshoot the sharp constant.
pub fn interpolant_moments(v: &[f64], grid: &RadialGrid) -> (f64, f64) {
    let d = grid.dim() as i32;
    let n = v.len();
    let r0 = grid.r(0);
    // Four-point Gauss rule; exact for the degree ≤ 2 + (d − 3) integrands.
    const X: [f64; 4] = [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
    const W: [f64; 4] = [0.347_854_845_137_453_9, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_9];
    let segment = |k: usize| -> (f64, f64) {
        // Segment k joins node k−1 and node k (k = 1..n−1); k = n joins the
        // last node to zero at R.
        let (a, b, fa, fb) = if k < n {
            (grid.r(k - 1), grid.r(k), v[k - 1], v[k])
        } else {
            (grid.r(n - 1), grid.r_max(), v[n - 1], 0.0)
        };
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut pot = 0.0;
        for (x, w) in X.iter().zip(W) {
            let t = 0.5 * (1.0 + x);
            let p = fa + (fb - fa) * t;
            pot += w * p * p * (mid + half * x).powi(d - 3);
        }
        let slope = (fb - fa) / (b - a);
        let grad = slope * slope * (b.powi(d) - a.powi(d)) / d as f64;
        (pot * half, grad)
    };
    let pot_core = v[0] * v[0] * r0.powi(d - 2) / (d - 2) as f64;
    let pot = pot_core + sum_by(1, n + 1, &|k| segment(k).0);
    let grad = sum_by(1, n + 1, &|k| segment(k).1);
    (pot, grad)
}

/// `∫ f²/r² dx / ∫ |∇f|² dx` on the interpolant.
pub fn hardy_ratio(f: &Field, grid: &RadialGrid) -> Result<f64> {
    f.checked(grid)?;
    let (pot, grad) = interpolant_moments(&f.values, grid);
    if grad == 0.0 || !grad.is_finite() {
        return Err(Error::Domain("Hardy ratio undefined for a field with zero gradient".into()));
    }
    Ok(pot / grad)
}

/// `∫_{ℝ⁵} |∇Φ|² dx` on the interpolant.
pub fn gradient_energy(v: &[f64], grid: &RadialGrid) -> f64 {
    grid.sphere_area() * interpolant_moments(v, grid).1
}

/// `∫_{ℝ⁵} (|∇Φ|² − (9/4) Φ²/r²) dx` on the interpolant.
pub fn coercivity_functional(phi: &Field, grid: &RadialGrid) -> Result<f64> {
    if grid.dim() != 5 {
        return Err(Error::Contract("coercivity functional is defined on a d = 5 grid".into()));
    }
    f_len(phi, grid)?;
    let (pot, grad) = interpolant_moments(&phi.values, grid);
    Ok(grid.sphere_area() * (grad - 2.25 * pot))
}

fn f_len(f: &Field, grid: &RadialGrid) -> Result<()> {
    if f.values.len() == grid.n() {
        Ok(())
    } else {
        Err(Error::Contract("field length does not match grid".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g5(n: usize, r: f64) -> RadialGrid {
        RadialGrid::new(n, r, 5).unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = RadialGrid::new(7, 10.0, 5).unwrap();
        assert_eq!(g.h() * 7.0, g.r_max());
        assert!(g.r(0) > 0.0);
        assert!(RadialGrid::new(8, 1.0, 4).is_err());
        assert!(RadialGrid::new(8, -1.0, 5).is_err());
        assert_eq!(g.index_range(0.0, 10.0), 0..7);
    }

    #[test]
    fn laplacian_of_quadratics() {
        let g = g5(64, 4.0);
        let c = laplacian(&Field::sample(&g, Parity::Even, |_| 3.0), &g).unwrap();
        assert!(c.values.iter().all(|v| v.abs() < 1e-12));
        let q = laplacian(&Field::sample(&g, Parity::Even, |r| r * r), &g).unwrap();
        for v in &q.values {
            assert!((v - 10.0).abs() < 1e-9, "{v}");
        }
        let g3 = g.with_dimension(3).unwrap();
        let q3 = laplacian(&Field::sample(&g3, Parity::Even, |r| r * r), &g3).unwrap();
        assert!(q3.values.iter().all(|v| (v - 6.0).abs() < 1e-9));
    }

    #[test]
    fn unset_parity_is_rejected() {
        let g = g5(8, 1.0);
        let f = Field::unset(vec![0.0; 8]);
        assert!(matches!(laplacian(&f, &g), Err(Error::Contract(_))));
    }

    fn gaussian_laplacian_error(n: usize) -> f64 {
        let g = g5(n, 6.0);
        let f = Field::sample(&g, Parity::Even, |r| (-r * r).exp());
        let l = laplacian(&f, &g).unwrap();
        (0..n)
            .map(|j| {
                let r = g.r(j);
                (l.values[j] - (4.0 * r * r - 10.0) * (-r * r).exp()).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn laplacian_converges_at_second_order() {
        let e1 = gaussian_laplacian_error(128);
        let e2 = gaussian_laplacian_error(256);
        let e3 = gaussian_laplacian_error(512);
        for ratio in [e1 / e2, e2 / e3] {
            assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}");
        }
    }

    #[test]
    fn even_laplacian_stays_finite_at_origin() {
        for n in [64, 256, 1024] {
            let g = g5(n, 4.0);
            let f = Field::sample(&g, Parity::Even, |r| (r * r).cos());
            let l = laplacian(&f, &g).unwrap();
            let r = g.r(0);
            let exact = -10.0 * (r * r).sin() - 4.0 * r * r * (r * r).cos();
            assert!((l.values[0] - exact).abs() < 10.0 * g.h() * g.h());
        }
    }

    #[test]
    fn norms_of_zero_and_bracket() {
        let g = g5(32, 3.0);
        let z = Field::zeros(32);
        assert_eq!(norm_l2(&z, &g).unwrap(), 0.0);
        assert_eq!(norm_h1(&z, &g).unwrap(), 0.0);
        assert_eq!(weighted_sup(&z, &g, bracket), 0.0);
        let f = Field::sample(&g, Parity::Even, |r| 1.0 / bracket(r));
        assert!((weighted_sup(&f, &g, bracket) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_l2_norm() {
        // (8π²/3) ∫₀^∞ e^{−2r²} r⁴ dr = (8π²/3)·(3/32)·sqrt(π/2)
        let exact = 8.0 * PI * PI / 3.0 * 3.0 / 32.0 * (PI / 2.0).sqrt();
        let g = g5(4096, 8.0);
        let f = Field::sample(&g, Parity::Even, |r| (-r * r).exp());
        let v = norm_l2(&f, &g).unwrap().powi(2);
        assert!(((v - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn ball_volume() {
        for d in [3, 5] {
            let g = RadialGrid::new(2000, 2.0, d).unwrap();
            let one = Field::even(vec![1.0; 2000]);
            let vol = norm_l2(&one, &g).unwrap().powi(2);
            let exact = sphere_area(d) * 2f64.powi(d as i32) / d as f64;
            assert!(((vol - exact) / exact).abs() < 1e-5);
        }
    }

    #[test]
    fn hardy_gaussian_bounds() {
        for d in [3u32, 5] {
            let g = RadialGrid::new(2048, 8.0, d).unwrap();
            let f = Field::sample(&g, Parity::Even, |r| (-r * r).exp());
            let ratio = hardy_ratio(&f, &g).unwrap();
            let sharp = 4.0 / ((d - 2) as f64).powi(2);
            assert!(ratio <= sharp + 10.0 * g.h());
            assert!(ratio > 0.0);
        }
        let g = g5(16, 1.0);
        assert!(hardy_ratio(&Field::zeros(16), &g).is_err());
    }

    #[test]
    fn coercivity_of_gaussian_matches_oracle() {
        // ω ∫ (4r⁶ − (9/4) r²) e^{−2r²} dr with ∫ r⁶e^{−2r²} = (15/128)√(π/2),
        // ∫ r² e^{−2r²} = (1/8)√(π/2).
        let s = (PI / 2.0).sqrt();
        let exact = 8.0 * PI * PI / 3.0 * (4.0 * 15.0 / 128.0 * s - 2.25 * s / 8.0);
        let g = g5(16384, 8.0);
        let f = Field::sample(&g, Parity::Even, |r| (-r * r).exp());
        let c = coercivity_functional(&f, &g).unwrap();
        assert!(c >= 0.0);
        assert!(((c - exact) / exact).abs() < 1e-6, "{c} vs {exact}");
        assert_eq!(coercivity_functional(&Field::zeros(16), &g5(16, 1.0)).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn hardy_never_overshoots(
            amps in proptest::collection::vec(-2.0f64..2.0, 3),
            widths in proptest::collection::vec(0.2f64..2.0, 3),
            centres in proptest::collection::vec(0.0f64..3.0, 3),
        ) {
            let g = g5(512, 10.0);
            let f = Field::sample(&g, Parity::Even, |r| {
                (0..3).map(|k| amps[k] * (-((r - centres[k]) / widths[k]).powi(2)).exp()).sum()
            });
            if let Ok(ratio) = hardy_ratio(&f, &g) {
                prop_assert!(ratio <= 4.0 / 9.0 + 10.0 * g.h());
                let c = coercivity_functional(&f, &g).unwrap();
                prop_assert!(c >= -1e-8 * gradient_energy(&f.values, &g));
            }
        }
    }
}
