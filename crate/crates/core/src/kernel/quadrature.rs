//! Composite Gauss–Legendre quadrature with global adaptive panel refinement.
//!
//! Integrands may be vector-like (see [`QuadValue`]) so that jets and small
//! tuples integrate in a single pass with one shared panel layout.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::jet::Jet;
use crate::error::{Error, Result};

/// Values that can be accumulated by the quadrature engine.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, c: f64) -> Self;
    /// Size used for error control.
    fn magnitude(&self) -> f64;
    /// Scalar reported in convergence errors.
    fn headline(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn headline(&self) -> f64 {
        *self
    }
}

impl QuadValue for Jet {
    fn zero() -> Self {
        Jet::default()
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn sub(self, o: Self) -> Self {
        self - o
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn magnitude(&self) -> f64 {
        self.v.abs().max(self.d1.abs()).max(self.d2.abs())
    }
    fn headline(&self) -> f64 {
        self.v
    }
}

impl<const K: usize> QuadValue for [f64; K] {
    fn zero() -> Self {
        [0.0; K]
    }
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.iter_mut().zip(o) {
            *a += b;
        }
        self
    }
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.iter_mut().zip(o) {
            *a -= b;
        }
        self
    }
    fn scale(mut self, c: f64) -> Self {
        for a in self.iter_mut() {
            *a *= c;
        }
        self
    }
    fn magnitude(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn headline(&self) -> f64 {
        self.first().copied().unwrap_or(0.0)
    }
}

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Single-panel rule on `[a, b]`.
    #[inline]
    pub fn apply<V: QuadValue>(&self, a: f64, b: f64, f: &impl Fn(f64) -> V) -> V {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc.add(f(c + h * x).scale(*w));
        }
        acc.scale(h)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const MAX_CACHED_ORDER: usize = 64;

/// Shared rule for orders up to 64.
pub fn rule(order: usize) -> &'static GaussLegendre {
    static RULES: [OnceLock<GaussLegendre>; MAX_CACHED_ORDER + 1] =
        [const { OnceLock::new() }; MAX_CACHED_ORDER + 1];
    assert!(
        (1..=MAX_CACHED_ORDER).contains(&order),
        "unsupported Gauss-Legendre order {order}"
    );
    RULES[order].get_or_init(|| GaussLegendre::new(order))
}

/// Tolerances and panel limits for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Points per panel.
    pub order: usize,
    /// Panels used before any refinement.
    pub min_panels: usize,
    pub max_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 16,
            min_panels: 1,
            max_panels: 1 << 14,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_min_panels(mut self, n: usize) -> Self {
        self.min_panels = n.clamp(1, self.max_panels);
        self
    }

    /// Initial panel count for integrands oscillating in `y` like `sin(k y)`
    /// over an interval of length `len`: about two panels per half-period.
    pub fn keyed_to_frequency(self, k: f64, len: f64) -> Self {
        let periods = (k.abs() * len.abs() / std::f64::consts::PI).ceil();
        let n = if periods.is_finite() { 2 * periods as usize } else { 1 };
        self.with_min_panels(n.max(self.min_panels).min(self.max_panels / 4))
    }
}

struct Panel<V> {
    a: f64,
    b: f64,
    left: V,
    right: V,
    err: f64,
    seq: usize,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn make_panel<V: QuadValue>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    coarse: V,
    f: &impl Fn(f64) -> V,
    seq: usize,
) -> Panel<V> {
    let m = 0.5 * (a + b);
    let left = rule.apply(a, m, f);
    let right = rule.apply(m, b, f);
    let err = coarse.sub(left.add(right)).magnitude();
    Panel {
        a,
        b,
        left,
        right,
        err,
        seq,
    }
}

/// Adaptive integral of `f` over `[a, b]` (signed: reversed limits negate).
pub fn integrate<V: QuadValue>(
    f: impl Fn(f64) -> V,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<V> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("non-finite integration limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(V::zero());
    }
    if b < a {
        return integrate(f, b, a, spec).map(|v| v.scale(-1.0));
    }
    let rule = rule(spec.order);
    let n0 = spec.min_panels.max(1).min(spec.max_panels);
    let width = (b - a) / n0 as f64;
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    let mut seq = 0;
    for i in 0..n0 {
        let pa = a + width * i as f64;
        let pb = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
        let coarse = rule.apply(pa, pb, &f);
        heap.push(make_panel(rule, pa, pb, coarse, &f, seq));
        seq += 1;
    }
    loop {
        let (total, err) = heap.iter().fold((V::zero(), 0.0), |(s, e), p| {
            (s.add(p.left.add(p.right)), e + p.err)
        });
        let tol = spec.abs_tol.max(spec.rel_tol * total.magnitude());
        if !err.is_finite() || !total.magnitude().is_finite() {
            return Err(Error::Convergence {
                a,
                b,
                panels: heap.len(),
                best: total.headline(),
                error: err,
            });
        }
        if err <= tol {
            return Ok(sum_in_order(heap));
        }
        if heap.len() >= spec.max_panels {
            return Err(Error::Convergence {
                a,
                b,
                panels: heap.len(),
                best: total.headline(),
                error: err,
            });
        }
        let worst = heap.pop().expect("non-empty panel set");
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) {
            // Panel cannot be split further in floating point.
            return Err(Error::Convergence {
                a,
                b,
                panels: heap.len() + 1,
                best: total.headline(),
                error: err,
            });
        }
        heap.push(make_panel(rule, worst.a, m, worst.left, &f, seq));
        heap.push(make_panel(rule, m, worst.b, worst.right, &f, seq + 1));
        seq += 2;
    }
}

/// Sum panel results left to right so the result does not depend on heap layout.
fn sum_in_order<V: QuadValue>(heap: BinaryHeap<Panel<V>>) -> V {
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels
        .iter()
        .fold(V::zero(), |s, p| s.add(p.left.add(p.right)))
}

/// `∫₀^g f(y) dy` with the signed convention `∫₀^g = -∫_g^0` for `g < 0`.
pub fn integrate_0_to<V: QuadValue>(g: f64, f: impl Fn(f64) -> V, spec: &QuadratureSpec) -> Result<V> {
    integrate(f, 0.0, g, spec)
}

/// Integrate over `[a, b]` after splitting at every multiple of `period`
/// inside the interval; used for integrands built from `sin² y`.
pub fn integrate_split<V: QuadValue>(
    f: impl Fn(f64) -> V,
    a: f64,
    b: f64,
    period: f64,
    spec: &QuadratureSpec,
) -> Result<V> {
    if a == b {
        return Ok(V::zero());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts = vec![lo];
    let mut k = (lo / period).floor() + 1.0;
    while k * period < hi {
        let c = k * period;
        if c > lo {
            cuts.push(c);
        }
        k += 1.0;
    }
    cuts.push(hi);
    let mut total = V::zero();
    for w in cuts.windows(2) {
        total = total.add(integrate(&f, w[0], w[1], spec)?);
    }
    Ok(total.scale(sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let n = 16;
        let r = rule(n);
        for deg in 0..(2 * n) {
            let q = r.apply(0.0, 1.0, &|x: f64| x.powi(deg as i32));
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!(((q - exact) / exact).abs() < 1e-14, "degree {deg}: {q} vs {exact}");
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33, 64] {
            let s: f64 = rule(n).weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "order {n}: {s}");
        }
    }

    #[test]
    fn empty_interval_is_zero() {
        let v = integrate_0_to(0.0, |y: f64| y.exp(), &QuadratureSpec::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn signed_convention() {
        let spec = QuadratureSpec::default();
        let f = |y: f64| (1.0 + 2.0 * y * y).sqrt();
        let p = integrate_0_to(1.0, f, &spec).unwrap();
        let m = integrate_0_to(-1.0, f, &spec).unwrap();
        // antiderivative of sqrt(1+2y^2): y/2 sqrt(1+2y^2) + asinh(sqrt2 y)/(2 sqrt2)
        let exact = 3f64.sqrt() / 2.0 + (2f64.sqrt()).asinh() / (2.0 * 2f64.sqrt());
        assert!((p - exact).abs() < 1e-13);
        assert_eq!(m, -integrate(f, -1.0, 0.0, &spec).unwrap());
        assert!((m + p).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_needs_refinement() {
        let spec = QuadratureSpec::default();
        let k = 200.0;
        let v = integrate(|y: f64| (k * y).sin().powi(2), 0.0, 3.0, &spec).unwrap();
        let exact = 1.5 - (2.0 * k * 3.0).sin() / (4.0 * k);
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn convergence_failure_carries_estimate() {
        let spec = QuadratureSpec {
            max_panels: 4,
            ..QuadratureSpec::default()
        };
        let err = integrate(|y: f64| (500.0 * y).sin().abs(), 0.0, 10.0, &spec).unwrap_err();
        match err {
            Error::Convergence { best, panels, .. } => {
                assert!(best.is_finite());
                assert!(panels >= 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_integration_handles_kinks() {
        let spec = QuadratureSpec::default();
        let v = integrate_split(|y: f64| y.sin().abs(), 0.0, 3.0 * std::f64::consts::PI, std::f64::consts::PI, &spec)
            .unwrap();
        assert!((v - 6.0).abs() < 1e-13);
        let w = integrate_split(|y: f64| y.sin().abs(), 3.0 * std::f64::consts::PI, 0.0, std::f64::consts::PI, &spec)
            .unwrap();
        assert_eq!(w, -v);
    }
}
