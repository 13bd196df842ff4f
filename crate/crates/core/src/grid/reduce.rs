//! Deterministic reductions.
//!
//! Sums are evaluated over a fixed binary tree of index ranges, so the result
//! depends only on the data and never on how rayon schedules the halves.

use rayon::prelude::*;

const LEAF: usize = 256;

/// Pairwise sum of `f(i)` for `i` in `lo..hi`.
pub fn sum_by(lo: usize, hi: usize, f: &(impl Fn(usize) -> f64 + Sync)) -> f64 {
    let n = hi - lo;
    if n <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += f(i);
        }
        return acc;
    }
    let mid = lo + n / 2;
    if n >= 8 * LEAF {
        let (a, b) = rayon::join(|| sum_by(lo, mid, f), || sum_by(mid, hi, f));
        a + b
    } else {
        sum_by(lo, mid, f) + sum_by(mid, hi, f)
    }
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    sum_by(0, xs.len(), &|i| xs[i])
}

/// Maximum of `f(i)`; NaN propagates.
pub fn max_by(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    (0..n)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Minimum of `f(i)`; NaN propagates.
pub fn min_by(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    -max_by(n, |i| -f(i))
}

/// `f(i)` for `i` in `0..n`, evaluated in parallel, order preserved.
pub fn map_nodes<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn independent_of_pool_size() {
        let xs: Vec<f64> = (0..100_003).map(|i| ((i as f64) * 0.37).sin() * 1e3f64.powi((i % 7) as i32 - 3)).collect();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| pairwise_sum(&xs));
        let b = four.install(|| pairwise_sum(&xs));
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn extrema() {
        assert_eq!(max_by(5, |i| i as f64), 4.0);
        assert_eq!(min_by(5, |i| i as f64 - 2.0), -2.0);
        assert!(max_by(3, |i| if i == 1 { f64::NAN } else { 0.0 }).is_nan());
        assert_eq!(max_by(0, |_| 1.0), f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn close_to_naive_sum(xs in proptest::collection::vec(-1e6f64..1e6, 0..3000)) {
            let naive: f64 = xs.iter().sum();
            let scale: f64 = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-12 * scale);
        }
    }
}
