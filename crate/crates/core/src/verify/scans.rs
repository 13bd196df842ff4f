//! Floating-point scans of the small-`r` inequalities and the Hardy family.
//! These are sampled checks, not interval proofs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{CheckEntry, VerificationReport};
use crate::error::{Error, Result};
use crate::grid::reduce::map_nodes;
use crate::grid::{hardy_ratio, Field, RadialGrid};
use crate::kernel::auxiliary::{b_aligned, lemma1_constant, lemma1_integrand};
use crate::kernel::quadrature::{rule, QuadratureSpec};

/// Fewest β samples per π the `lemma1` scan accepts.
pub const MIN_BETA_RESOLUTION: usize = 256;
/// Fewest samples per axis the corollary scan accepts.
pub const MIN_GRID_RESOLUTION: usize = 16;
/// Points per scan cell; cells are short enough that this is exact to rounding.
const CELL_ORDER: usize = 12;

pub const LEMMA1_FLOOR: f64 = -1e-12;
pub const FE1_BOUND: f64 = 1.0 / 12.0;
pub const FE1_SLACK: f64 = 1e-10;
pub const COROLLARY_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Params {
    pub r_max: f64,
    pub beta_max: f64,
    /// β samples per π; also the number of `r` rows.
    pub resolution: usize,
}

impl Default for Lemma1Params {
    fn default() -> Self {
        Lemma1Params { r_max: 0.5, beta_max: 20.0 * PI, resolution: MIN_BETA_RESOLUTION }
    }
}

impl Lemma1Params {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) || !(self.beta_max > 0.0 && self.beta_max.is_finite()) {
            return Err(Error::Config(format!("scan needs r_max > 0 and beta_max > 0, got {} and {}", self.r_max, self.beta_max)));
        }
        if self.resolution < MIN_BETA_RESOLUTION {
            return Err(Error::Config(format!(
                "resolution {} is below the floor of {MIN_BETA_RESOLUTION} samples per pi",
                self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Scan {
    pub params: Lemma1Params,
    /// Largest scanned radius `≤ ½` with `F ≥ −10⁻¹²` on every row up to it.
    pub r0: f64,
    /// Smallest `F` over rows with `r ≤ r₀`, and where it occurs.
    pub min_value: f64,
    pub min_at: (f64, f64),
    /// Largest scanned radius below which the per-period integral stays `≥ 1/12`.
    pub r1: f64,
    /// Smallest per-period integral `F(r, π)` over rows below `r₁`.
    pub min_period_value: f64,
    /// Largest distance of a detected interior local minimum from `2π/3 (mod π)`.
    pub minima_offset: f64,
    pub minima_found: usize,
    /// `∫₀^π sin y (3/4 − sin²y) dy`.
    pub period_constant: f64,
}

fn cell_integral(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    rule(CELL_ORDER).apply(a, b, f)
}

fn distance_mod_pi(x: f64, target: f64) -> f64 {
    let d = (x - target).rem_euclid(PI);
    d.min(PI - d)
}

struct Row {
    r: f64,
    min: f64,
    argmin: f64,
    period: f64,
    minima_offset: f64,
    minima: usize,
}

fn lemma1_row(r: f64, p: &Lemma1Params) -> Row {
    let db = PI / p.resolution as f64;
    let cells = (p.beta_max / db).round() as usize;
    let f = |y: f64| lemma1_integrand(r, y);
    let mut vals = Vec::with_capacity(cells + 1);
    vals.push(0.0);
    let mut acc = 0.0;
    for k in 0..cells {
        acc += cell_integral(&f, k as f64 * db, (k + 1) as f64 * db);
        vals.push(acc);
    }
    let (mut min, mut argmin) = (f64::INFINITY, 0.0);
    // β = 0 is the trivial zero; the scan checks the interior and far end.
    for (k, &v) in vals.iter().enumerate().skip(1) {
        if v < min {
            min = v;
            argmin = k as f64 * db;
        }
    }
    let mut minima_offset: f64 = 0.0;
    let mut minima = 0;
    for k in 1..cells {
        if vals[k] < vals[k - 1] && vals[k] <= vals[k + 1] {
            minima += 1;
            minima_offset = minima_offset.max(distance_mod_pi(k as f64 * db, 2.0 * PI / 3.0));
        }
    }
    Row { r, min, argmin, period: vals[p.resolution.min(cells)], minima_offset, minima }
}

/// Scans `F(r, β)` over `r_k = k r_max / n`, `k = 1..n`, and `β` on a grid
/// of `resolution` cells per π up to `β_max`, by cumulative Gauss-Legendre.
pub fn lemma1_scan(params: &Lemma1Params) -> Result<Lemma1Scan> {
    params.validate()?;
    let n = params.resolution;
    let rows = map_nodes(n, |k| lemma1_row(params.r_max * (k + 1) as f64 / n as f64, params));
    let mut r0 = 0.0;
    for row in &rows {
        if row.r > 0.5 || !(row.min >= LEMMA1_FLOOR) {
            break;
        }
        r0 = row.r;
    }
    let mut r1 = 0.0;
    let mut min_period = f64::INFINITY;
    for row in &rows {
        if !(row.period >= FE1_BOUND - FE1_SLACK) {
            break;
        }
        r1 = row.r;
        min_period = min_period.min(row.period);
    }
    let (mut min_value, mut min_at) = (f64::INFINITY, (0.0, 0.0));
    for row in rows.iter().filter(|row| row.r <= r0) {
        if row.min < min_value {
            min_value = row.min;
            min_at = (row.r, row.argmin);
        }
    }
    if r0 == 0.0 {
        // Report the offending first row instead of an empty minimum.
        min_value = rows[0].min;
        min_at = (rows[0].r, rows[0].argmin);
    }
    let minima_offset = rows.iter().map(|row| row.minima_offset).fold(0.0, f64::max);
    let minima_found = rows.iter().map(|row| row.minima).sum();
    let spec = QuadratureSpec::default().with_tolerances(1e-16, 1e-15);
    Ok(Lemma1Scan {
        params: *params,
        r0,
        min_value,
        min_at,
        r1,
        min_period_value: min_period,
        minima_offset,
        minima_found,
        period_constant: lemma1_constant(&spec)?,
    })
}

impl Lemma1Scan {
    pub fn report(&self) -> VerificationReport {
        let p = &self.params;
        let db = PI / p.resolution as f64;
        let mut rep = VerificationReport::new("lemma1");
        rep.push(CheckEntry::at_most(
            "lemma1_period_constant",
            "int_0^pi sin y (3/4 - sin^2 y) dy = 1/6",
            (self.period_constant - 1.0 / 6.0).abs(),
            1e-12,
        ));
        rep.push(CheckEntry::at_least("lemma1_radius_positive", "F(r, beta) >= 0 on (0, r0]", self.r0, f64::MIN_POSITIVE));
        rep.push(
            CheckEntry::at_least("lemma1_scan_minimum", "F(r, beta) >= 0 on (0, r0] x [0, beta_max]", self.min_value, LEMMA1_FLOOR)
                .with_detail(format!("at r={}, beta={}", self.min_at.0, self.min_at.1)),
        );
        rep.push(CheckEntry::at_least(
            "lemma1_per_period_bound",
            "int_0^pi (r^2 + 2 sin^2 y)^1/2 (3/4 - sin^2 y) dy >= 1/12 for r < r1",
            self.min_period_value,
            FE1_BOUND - FE1_SLACK,
        ));
        rep.push(
            CheckEntry::at_most(
                "lemma1_minima_location",
                "interior minima of F sit at beta = 2 pi/3 (mod pi)",
                self.minima_offset,
                1.5 * db,
            )
            .with_detail(format!("{} local minima", self.minima_found)),
        );
        rep.note("lemma1_r0", self.r0);
        rep.note("lemma1_r1", self.r1);
        rep.note(
            "lemma1_scan",
            format!("r in (0, {}] x beta in [0, {}], {} rows, {} cells per pi, GL{CELL_ORDER} per cell, floating point", p.r_max, p.beta_max, p.resolution, p.resolution),
        );
        rep
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Params {
    pub r0: f64,
    pub z_max: f64,
    /// Samples per axis: `r` rows in `(0, r₀]` and `z` nodes on each side of 0.
    pub resolution: usize,
}

impl Corollary1Params {
    pub fn new(r0: f64) -> Self {
        Corollary1Params { r0, z_max: 8.0 * PI, resolution: 512 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) || !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::Config(format!("scan needs r0 > 0 and z_max > 0, got {} and {}", self.r0, self.z_max)));
        }
        if self.resolution < MIN_GRID_RESOLUTION {
            return Err(Error::Config(format!(
                "resolution {} is below the floor of {MIN_GRID_RESOLUTION}",
                self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Scan {
    pub params: Corollary1Params,
    /// Smallest `(9/8)G₂²/r² − |G₁|` over the grid, and where.
    pub min_margin: f64,
    pub min_at: (f64, f64),
    /// Largest relative gap between `z` and `−z` margins.
    pub parity_gap: f64,
    /// Largest `|margin|` on the `z = 0` row (exactly 0 by construction).
    pub axis_margin: f64,
}

/// Margins `(9/8)G₂(w)²/r² − |G₁(w)|` at `w = k z_max / m`, `k = 0..m`, with
/// `sign` choosing the side. `G₂`, `G₀` and `G₁` accumulate cell by cell;
/// `G₀` at the inner nodes of a cell comes from a sub-rule on `[a, w_i]`.
fn corollary_row(r: f64, z_max: f64, m: usize, sign: f64) -> Vec<f64> {
    let gl = rule(CELL_ORDER);
    let dz = sign * z_max / m as f64;
    let root = |w: f64| b_aligned(r, w).sqrt();
    let g0_weight = |w: f64| {
        let b = b_aligned(r, w);
        b.sqrt() * (b - 1.0)
    };
    let (mut g2, mut g0, mut g1) = (0.0, 0.0, 0.0);
    let mut out = Vec::with_capacity(m + 1);
    out.push(0.0);
    for k in 0..m {
        let a = k as f64 * dz;
        let b = (k + 1) as f64 * dz;
        let inner = |w: f64| (g0 + gl.apply(a, w, &g0_weight)) * root(w);
        g1 += 1.5 * gl.apply(a, b, &inner);
        g0 += gl.apply(a, b, &g0_weight);
        g2 += gl.apply(a, b, &root);
        out.push(1.125 * g2 * g2 / (r * r) - g1.abs());
    }
    out
}

/// Scans the corollary margin on `r_i = i r₀ / n`, `i = 1..n`, and `n` nodes
/// on each side of `z = 0`; the negative side is integrated separately so
/// evenness is a check rather than an assumption.
pub fn corollary1_scan(params: &Corollary1Params) -> Result<Corollary1Scan> {
    params.validate()?;
    let n = params.resolution;
    let rows = map_nodes(n, |i| {
        let r = params.r0 * (i + 1) as f64 / n as f64;
        (r, corollary_row(r, params.z_max, n, 1.0), corollary_row(r, params.z_max, n, -1.0))
    });
    let (mut min_margin, mut min_at) = (f64::INFINITY, (0.0, 0.0));
    let mut parity_gap: f64 = 0.0;
    let mut axis_margin: f64 = 0.0;
    let dz = params.z_max / n as f64;
    for (r, pos, neg) in &rows {
        axis_margin = axis_margin.max(pos[0].abs()).max(neg[0].abs());
        for k in 0..=n {
            for (v, z) in [(pos[k], k as f64 * dz), (neg[k], -(k as f64) * dz)] {
                if !(v >= min_margin) {
                    min_margin = v;
                    min_at = (*r, z);
                }
            }
            let gap = (pos[k] - neg[k]).abs();
            if gap > 0.0 {
                parity_gap = parity_gap.max(gap / pos[k].abs().max(neg[k].abs()));
            }
        }
    }
    Ok(Corollary1Scan { params: *params, min_margin, min_at, parity_gap, axis_margin })
}

impl Corollary1Scan {
    pub fn report(&self) -> VerificationReport {
        let p = &self.params;
        let mut rep = VerificationReport::new("corollary1");
        rep.push(
            CheckEntry::at_least(
                "corollary1_margin",
                "(9/8) G2^2/r^2 - |G1| >= 0 for 0 < r <= r0",
                self.min_margin,
                COROLLARY_FLOOR,
            )
            .with_detail(format!("at r={}, z={}", self.min_at.0, self.min_at.1)),
        );
        rep.push(CheckEntry::at_most("corollary1_axis_row", "margin vanishes at z = 0", self.axis_margin, 0.0));
        rep.push(CheckEntry::at_most("corollary1_evenness", "margin(r, z) = margin(r, -z)", self.parity_gap, 1e-12));
        rep.note(
            "corollary1_scan",
            format!("r in (0, {}] x z in [-{}, {}], {} rows, {} cells per side, GL{CELL_ORDER} nested per cell", p.r0, p.z_max, p.z_max, p.resolution, p.resolution),
        );
        rep
    }
}

/// Radii where the Hardy family changes shape.
pub const HARDY_CORE: f64 = 1.0;
pub const HARDY_LOG_SPAN: f64 = 4.0;

/// `(r² + ε²)^{−3/4} τ(r)` with `τ = 1` on `[0, 1]`, `τ = ln(R₂/r)/L` on
/// `[1, R₂]` and 0 beyond, `R₂ = e^L`. It tends to `r^{−3/2}` as `ε → 0`,
/// the profile saturating the sharp five-dimensional Hardy constant.
pub fn hardy_profile(eps: f64, r: f64) -> f64 {
    let outer = HARDY_CORE * HARDY_LOG_SPAN.exp();
    let tau = if r <= HARDY_CORE {
        1.0
    } else if r < outer {
        (outer / r).ln() / HARDY_LOG_SPAN
    } else {
        0.0
    };
    (r * r + eps * eps).powf(-0.75) * tau
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyMember {
    pub eps: f64,
    pub h: f64,
    pub ratio: f64,
}

/// `ε_n = ε₀ 2^{−n}` for `n < members`, each on a `d = 5` grid with `h = ε/8`
/// reaching exactly to the end of the support.
pub fn hardy_family(eps0: f64, members: usize) -> Result<Vec<HardyMember>> {
    let outer = HARDY_CORE * HARDY_LOG_SPAN.exp();
    (0..members)
        .map(|n| {
            let eps = eps0 / (1u64 << n) as f64;
            let nodes = (outer / (eps / 8.0)).ceil() as usize;
            let grid = RadialGrid::new(nodes, outer, 5)?;
            let f = Field::even(map_nodes(nodes, |j| hardy_profile(eps, grid.r(j))));
            Ok(HardyMember { eps, h: grid.h(), ratio: hardy_ratio(&f, &grid)? })
        })
        .collect()
}

pub fn hardy_report(family: &[HardyMember]) -> VerificationReport {
    let sharp = 4.0 / 9.0;
    let mut rep = VerificationReport::new("hardy");
    let worst_step = family.windows(2).map(|w| w[1].ratio - w[0].ratio).fold(f64::INFINITY, f64::min);
    rep.push(CheckEntry::at_least("hardy_monotone", "Hardy ratios increase along the family", worst_step, f64::MIN_POSITIVE));
    let last = family.last().map_or(f64::NAN, |m| m.ratio);
    rep.push(CheckEntry::at_least("hardy_near_sharp", "Hardy ratio approaches 4/9", last, 0.42));
    let overshoot = family.iter().map(|m| m.ratio - (sharp + 10.0 * m.h)).fold(f64::NEG_INFINITY, f64::max);
    rep.push(CheckEntry::at_most("hardy_below_sharp", "Hardy ratio <= 4/9 + 10h", overshoot, 0.0));
    let listing: Vec<String> = family.iter().map(|m| format!("{}:{}", m.eps, m.ratio)).collect();
    rep.note("hardy_family", listing.join(" "));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::auxiliary::{eval_g1, eval_g2, lemma1_f};

    #[test]
    fn lemma1_rows_match_adaptive_quadrature() {
        let p = Lemma1Params { r_max: 0.5, beta_max: 4.0 * PI, resolution: 256 };
        let row = lemma1_row(0.3, &p);
        let spec = QuadratureSpec::default().with_tolerances(1e-15, 1e-14);
        let exact = lemma1_f(0.3, PI, &spec).unwrap();
        assert!((row.period - exact).abs() < 1e-13);
        assert!(row.minima_offset < 2.0 * PI / 256.0);
        assert!(row.minima >= 3);
        // F(r, 0) = 0 is the first sample of every row.
        assert!(row.min > 0.0);
    }

    #[test]
    fn small_radius_period_is_sqrt2_sixth() {
        let p = Lemma1Params { r_max: 1e-6, beta_max: PI, resolution: 256 };
        assert!((lemma1_row(1e-6, &p).period - 2f64.sqrt() / 6.0).abs() < 1e-9);
    }

    #[test]
    fn resolution_floor() {
        assert!(lemma1_scan(&Lemma1Params { resolution: 100, ..Default::default() }).is_err());
        assert!(corollary1_scan(&Corollary1Params { resolution: 4, ..Corollary1Params::new(0.5) }).is_err());
    }

    #[test]
    fn corollary_rows_match_nested_quadrature() {
        let spec = QuadratureSpec::default().with_tolerances(1e-14, 1e-12);
        let r = 0.37;
        let row = corollary_row(r, 8.0 * PI, 64, 1.0);
        for k in [1usize, 7, 33, 64] {
            let z = k as f64 * 8.0 * PI / 64.0;
            let exact = 1.125 * eval_g2(r, z, &spec).unwrap().powi(2) / (r * r) - eval_g1(r, z, &spec).unwrap().abs();
            assert!((row[k] - exact).abs() < 1e-9 * exact.abs().max(1.0), "z={z}: {} vs {exact}", row[k]);
        }
    }

    #[test]
    fn small_scans_pass() {
        let l = lemma1_scan(&Lemma1Params { beta_max: 2.0 * PI, ..Default::default() }).unwrap();
        assert!(l.report().all_pass(), "{}", l.report().to_table());
        let c = corollary1_scan(&Corollary1Params { resolution: 32, ..Corollary1Params::new(l.r0) }).unwrap();
        assert!(c.report().all_pass(), "{}", c.report().to_table());
    }

    #[test]
    fn scans_are_deterministic() {
        let p = Corollary1Params { resolution: 24, ..Corollary1Params::new(0.5) };
        let a = serde_json::to_string(&corollary1_scan(&p).unwrap()).unwrap();
        let b = serde_json::to_string(&corollary1_scan(&p).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hardy_profile_shape() {
        assert_eq!(hardy_profile(0.1, 60.0), 0.0);
        assert!((hardy_profile(1e-9, 0.5) - 0.5f64.powf(-1.5)).abs() < 1e-6);
        let coarse = hardy_family(0.16, 2).unwrap();
        assert!(coarse[1].ratio > coarse[0].ratio);
        assert!(coarse.iter().all(|m| m.ratio < 4.0 / 9.0));
    }
}
