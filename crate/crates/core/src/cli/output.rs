//! Bit-stable text artifacts: CSV with shortest round-trip numbers, JSON and
//! a minimal SVG polyline plot. Every file is written to a temporary name and
//! renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// Shortest decimal that parses back to the same `f64`, independent of locale.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Header plus one line per row, comma separated.
pub fn csv(columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = columns.join(",");
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// One labelled line chart of `y` against `x`.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 60.0;
    let finite: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| a.is_finite() && b.is_finite()).map(|(a, b)| (*a, *b)).collect();
    let span = |vals: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            (lo, hi)
        } else {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 1e-6 };
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = span(&mut finite.iter().map(|p| p.0));
    let (y0, y1) = span(&mut finite.iter().map(|p| p.1));
    let px = |v: f64| M + (v - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |v: f64| H - M - (v - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="black" points="{M},{} {M},{} {},{}"/>"#,
        M,
        H - M,
        W - M,
        H - M
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#, W / 2.0, H - 16.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (v, yy) in [(y0, py(y0)), (y1, py(y1))] {
        let _ = writeln!(s, r#"<text x="{}" y="{yy}" text-anchor="end" font-family="sans-serif" font-size="10">{}</text>"#, M - 4.0, fmt_tick(v));
    }
    for (v, xx) in [(x0, px(x0)), (x1, px(x1))] {
        let _ = writeln!(s, r#"<text x="{xx}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="10">{}</text>"#, H - M + 14.0, fmt_tick(v));
    }
    let pts: Vec<String> = finite.iter().map(|&(a, b)| format!("{:.2},{:.2}", px(a), py(b))).collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    format!("{v:.6e}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_numbers_round_trip(v in proptest::num::f64::ANY) {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            prop_assert!(back.to_bits() == v.to_bits() || (v.is_nan() && back.is_nan()));
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv(&["a", "b"], vec![vec![1.0, 1e-7], vec![0.1, -2.5]]);
        assert_eq!(s, "a,b\n1.0,1e-7\n0.1,-2.5\n");
    }

    #[test]
    fn atomic_write_leaves_no_temporary() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.csv");
        write_atomic(&p, "hello").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "hello");
        let names: Vec<_> = std::fs::read_dir(p.parent().unwrap()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names.len(), 1);
    }

    #[test]
    fn svg_is_well_formed_for_flat_and_empty_series() {
        for (x, y) in [(vec![0.0, 1.0], vec![2.0, 2.0]), (vec![], vec![]), (vec![0.0, 1.0], vec![f64::NAN, 1.0])] {
            let s = svg_plot("E <t>", "t", "E", &x, &y);
            assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
            assert!(!s.contains("NaN"));
            assert!(s.contains("&lt;t&gt;"));
        }
    }
}
