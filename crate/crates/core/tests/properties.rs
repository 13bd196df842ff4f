//! Property tests of the library's invariants through the public API.

use hedgehog::dynamics::{hamiltonian, step, GaussianProfile, InitialData, ModelParams, SimState};
use hedgehog::grid::{hardy_ratio, laplacian, Field, Parity, RadialGrid};
use hedgehog::kernel::{a1, b_aligned, eval_b, eval_ftilde, eval_g0, eval_g2, KernelTable, QuadratureSpec};
use hedgehog::transforms::{compute_phi1, compute_phi2};
use hedgehog::verify::identities::{identity_report, identity_spec, SampleSet};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ftilde_is_even_bit_for_bit(i in 0usize..5, x in -40.0f64..40.0) {
        prop_assert_eq!(eval_ftilde(i, x).unwrap().to_bits(), eval_ftilde(i, -x).unwrap().to_bits());
    }

    #[test]
    fn series_and_closed_forms_meet(i in 0usize..5, t in 0.5f64..2.0) {
        let table = KernelTable::standard();
        let x = t * table.switch_radius;
        let (s, c) = (table.series(i, x), table.closed(i, x));
        prop_assert!((s - c).abs() <= 1e-13 * s.abs().max(c.abs()), "F{}({}): {} vs {}", i, x, s, c);
    }

    #[test]
    fn coefficients_are_at_least_one(r in 1e-3f64..20.0, y in -50.0f64..50.0, phase in -7.0f64..7.0) {
        prop_assert!(a1(r, y) >= 1.0);
        prop_assert!(b_aligned(r, y) >= 1.0);
        prop_assert!(eval_b(r, y, phase).unwrap() >= 1.0);
    }

    #[test]
    fn g0_nonnegative_and_g2_increasing(r in 1e-2f64..5.0, w1 in 0.0f64..10.0, dw in 1e-3f64..5.0) {
        prop_assert!(eval_g0(r, w1, &spec()).unwrap() >= 0.0);
        prop_assert!(eval_g2(r, w1 + dw, &spec()).unwrap() > eval_g2(r, w1, &spec()).unwrap());
    }

    #[test]
    fn hardy_ratio_respects_sharp_constant(a in 0.1f64..3.0, c in 0.0f64..3.0, s in 0.2f64..1.5, n in 32usize..256) {
        let grid = RadialGrid::new(n, 10.0, 5).unwrap();
        let f = Field::sample(&grid, Parity::Even, |r| a * (-((r - c) / s).powi(2)).exp());
        prop_assert!(hardy_ratio(&f, &grid).unwrap() <= 4.0 / 9.0 + 10.0 * grid.h());
    }

    #[test]
    fn phi1_is_r_times_phi2(a in -2.0f64..2.0, n1 in 0u32..3) {
        let grid = RadialGrid::new(64, 8.0, 5).unwrap();
        let s = SimState::from_data(grid, ModelParams::skyrme(n1), &InitialData::gaussian(a, 2.0, 0.5)).unwrap();
        let p1 = compute_phi1(&s, &spec()).unwrap();
        let p2 = compute_phi2(&s, &spec()).unwrap();
        for j in 0..grid.n() {
            prop_assert!((p1.values[j] - grid.r(j) * p2.values[j]).abs() <= 4.0 * f64::EPSILON * p1.values[j].abs());
        }
    }

    #[test]
    fn energy_is_nonnegative(a in -3.0f64..3.0, b in -3.0f64..3.0, n1 in 0u32..3) {
        let grid = RadialGrid::new(64, 8.0, 5).unwrap();
        let data = InitialData { g0: GaussianProfile::new(a, 2.0, 0.5), g1: GaussianProfile::new(b, 1.5, 0.4) };
        let s = SimState::from_data(grid, ModelParams::skyrme(n1), &data).unwrap();
        prop_assert!(hamiltonian(&s, &spec()).unwrap() >= 0.0);
    }

    #[test]
    fn steps_keep_even_parity(a in -2.0f64..2.0, n1 in 0u32..2) {
        let grid = RadialGrid::new(64, 8.0, 5).unwrap();
        let mut s = SimState::from_data(grid, ModelParams::skyrme(n1), &InitialData::gaussian(a, 2.0, 0.5)).unwrap();
        for _ in 0..8 {
            s = step(&s, 0.25 * grid.h()).unwrap();
            prop_assert!(s.parity_defect() < 1e-12);
        }
    }
}

#[test]
fn g2_derivative_matches_integrand_at_second_order() {
    let tight = spec().with_tolerances(1e-15, 1e-14);
    let (r, w) = (0.7, 2.3);
    let exact = (1.0 + 2.0 * (r * w as f64).sin().powi(2) / (r * r)).sqrt();
    let err = |h: f64| ((eval_g2(r, w + h, &tight).unwrap() - eval_g2(r, w - h, &tight).unwrap()) / (2.0 * h) - exact).abs();
    let (e1, e2) = (err(1e-2), err(5e-3));
    assert!((e1 / e2 - 4.0).abs() < 0.2, "{e1:e} {e2:e}");
}

#[test]
fn laplacian_of_even_field_is_finite_at_the_first_node() {
    for n in [64, 256, 1024] {
        let grid = RadialGrid::new(n, 4.0, 5).unwrap();
        let f = Field::sample(&grid, Parity::Even, |r| (-r * r).exp());
        let lap = laplacian(&f, &grid).unwrap();
        assert!((lap.values[0] + 10.0).abs() < 40.0 * grid.h() * grid.h() + 1e-9, "N={n}: {}", lap.values[0]);
    }
}

#[test]
fn every_report_entry_carries_a_relation() {
    let rep = identity_report(&SampleSet::standard(), 1e-9, &identity_spec()).unwrap();
    assert!(!rep.checks.is_empty());
    assert!(rep.checks.iter().all(|c| !c.eq_tag.trim().is_empty()));
}
