mod common;

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::channels::{depolarizing, twirl_exact, totally_depolarizing, CMatrix, DensityMatrix, Superoperator};
use rblab::clifford::CliffordGroup;
use rblab::engine::{
    exact_average_curve, exact_average_fidelity, first_order_prediction, gamma, model_coefficients,
    perturbation_bound, run_experiment, step_average_error_operator, Axis, NoiseModel, RbConfig, SpamSpec,
    StepNoise,
};
use rblab::fitting::{classify_flat_curve, FlatKind};
use rblab::RbError;

fn group1() -> Arc<CliffordGroup> {
    Arc::new(CliffordGroup::enumerate(1).unwrap())
}

#[test]
fn gate_independent_curve_matches_zeroth_model_with_spam() {
    for n in [1, 2] {
        let d = 1usize << n;
        let noise = NoiseModel::gate_independent(n, depolarizing(0.95, d).unwrap()).unwrap();
        let spam = SpamSpec::depolarized(n, 0.03, 0.05).unwrap();
        let coeffs = model_coefficients(&noise, &spam).unwrap();
        assert!((coeffs.p - 0.95).abs() < 1e-12);
        let ms = [1, 2, 7, 30];
        let exact = exact_average_curve(&ms, &noise, &spam).unwrap();
        for (&m, e) in ms.iter().zip(&exact) {
            assert!((e - coeffs.zeroth_order(m)).abs() < 1e-12, "n={n} m={m}");
        }
        assert_eq!(gamma(&noise).unwrap(), vec![0.0]);
        assert_eq!(perturbation_bound(2, &[0.0], 10).unwrap(), 0.0);
    }
}

#[test]
fn two_qubit_gate_dependent_exact_is_a_capacity_error() {
    let noise = NoiseModel::random_over_rotation(2, 0.1, Axis::Z, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let err = exact_average_fidelity(3, &noise, &SpamSpec::ideal(2)).unwrap_err();
    assert!(matches!(err, RbError::Capacity(_)), "{err}");
}

#[test]
fn simulated_means_approach_the_exact_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let noise = common::random_gate_dependent(&group1(), 0.4, &mut rng);
    let spam = SpamSpec::depolarized(1, 0.01, 0.02).unwrap();
    let cfg = RbConfig {
        n: 1,
        m_list: vec![1, 5, 20],
        k: 4000,
        shots: 0,
        seed: 3,
    };
    let data = run_experiment(&cfg, &noise, &spam).unwrap();
    let exact = exact_average_curve(&cfg.m_list, &noise, &spam).unwrap();
    for (pt, e) in data.mean_curve().iter().zip(&exact) {
        // Five standard errors of the per-sequence spread.
        let se = (pt.variance / pt.count as f64).sqrt();
        assert!((pt.mean - e).abs() <= 5.0 * se + 1e-12, "m={} {} vs {e}", pt.m, pt.mean);
    }
}

#[test]
fn runs_are_deterministic_per_seed() {
    let noise = NoiseModel::random_over_rotation(1, 0.3, Axis::X, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    let spam = SpamSpec::ideal(1);
    let cfg = RbConfig {
        n: 1,
        m_list: vec![1, 4, 9],
        k: 30,
        shots: 50,
        seed: 99,
    };
    let a = run_experiment(&cfg, &noise, &spam).unwrap();
    let b = run_experiment(&cfg, &noise, &spam).unwrap();
    assert_eq!(a, b);
    let c = run_experiment(&RbConfig { seed: 100, ..cfg }, &noise, &spam).unwrap();
    assert_ne!(a, c);
    for r in a.records() {
        let k = r.successes.unwrap();
        assert!(k <= r.shots);
        assert_eq!(r.survival, k as f64 / r.shots as f64);
    }
}

#[test]
fn time_dependent_first_order_within_symmetric_sum_bound() {
    let group = group1();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let horizon = 12;
    let steps: Vec<StepNoise> = (0..horizon)
        .map(|_| common::random_gate_dependent(&group, 0.1, &mut rng).into_step().unwrap())
        .collect();
    let noise = NoiseModel::time_dependent(1, steps).unwrap();
    let spam = SpamSpec::ideal(1);
    let gammas = gamma(&noise).unwrap();
    assert_eq!(gammas.len(), horizon);
    let ms: Vec<usize> = (1..horizon).collect();
    let exact = exact_average_curve(&ms, &noise, &spam).unwrap();
    for (&m, e) in ms.iter().zip(&exact) {
        let gap = (e - first_order_prediction(m, &noise, &spam).unwrap()).abs();
        let bound = perturbation_bound(2, &gammas, m).unwrap();
        assert!(gap <= bound, "m={m}: {gap} > {bound}");
    }
    assert!(matches!(exact_average_fidelity(horizon, &noise, &spam), Err(RbError::Contract(_))));
}

#[test]
fn symmetric_sum_reduces_to_binomial_form() {
    let flat = vec![0.01; 21];
    let a = perturbation_bound(2, &flat, 20).unwrap();
    let b = perturbation_bound(2, &[0.01], 20).unwrap();
    assert!((a - 0.021).abs() < 1e-15 && (b - 0.021).abs() < 1e-15);
}

#[test]
fn twirled_step_average_is_depolarizing() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let group = group1();
    let noise = common::random_gate_dependent(&group, 0.5, &mut rng);
    let lambda = step_average_error_operator(&noise, 1).unwrap();
    let twirled = twirl_exact(&lambda, group.elements()).unwrap();
    let target = depolarizing(lambda.depolarizing_parameter(), 2).unwrap();
    assert!(twirled.max_abs_diff(&target) < 1e-12);
    assert!(twirl_exact(&lambda, &group.elements()[..23]).is_err());
}

#[test]
fn flat_curve_cases_are_classified() {
    let spam = SpamSpec::ideal(1);
    let zero = NoiseModel::gate_independent(1, totally_depolarizing(2).unwrap()).unwrap();
    let c = model_coefficients(&zero, &spam).unwrap();
    assert_eq!(classify_flat_curve(&c, &spam).kind, FlatKind::PZero);

    let one = NoiseModel::identity(1).unwrap();
    let c = model_coefficients(&one, &spam).unwrap();
    assert_eq!(classify_flat_curve(&c, &spam).kind, FlatKind::POne);

    // E = 𝟙/2 makes every trace-preserving image score the same.
    let half = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
    let blind = SpamSpec::new(DensityMatrix::basis_state(2, 0).unwrap(), half).unwrap();
    let dep = NoiseModel::gate_independent(1, depolarizing(0.9, 2).unwrap()).unwrap();
    let c = model_coefficients(&dep, &blind).unwrap();
    assert_eq!(classify_flat_curve(&c, &blind).kind, FlatKind::A0Zero);
    let curve = exact_average_curve(&[1, 3, 9], &dep, &blind).unwrap();
    assert!(curve.iter().all(|f| (f - 0.5).abs() < 1e-12));

    let c = model_coefficients(&dep, &spam).unwrap();
    assert_eq!(classify_flat_curve(&c, &spam).kind, FlatKind::NotFlat);
}

#[test]
fn non_cptp_noise_is_rejected() {
    let bad = Superoperator::identity(2).scale(1.1);
    assert!(NoiseModel::gate_independent(1, bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn survivals_stay_in_unit_interval(seed: u64, angle in 0.0f64..3.0, shots in 0u64..20) {
        let noise = NoiseModel::random_over_rotation(1, angle, Axis::Y, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let spam = SpamSpec::depolarized(1, 0.1, 0.1).unwrap();
        let cfg = RbConfig { n: 1, m_list: vec![1, 3, 6], k: 5, shots, seed };
        let data = run_experiment(&cfg, &noise, &spam).unwrap();
        prop_assert!(data.records().iter().all(|r| (0.0..=1.0).contains(&r.survival)));
        let exact = exact_average_curve(&cfg.m_list, &noise, &spam).unwrap();
        prop_assert!(exact.iter().all(|f| (-1e-12..=1.0 + 1e-12).contains(f)));
    }

    #[test]
    fn gamma_is_nonnegative_and_bounds_grow_with_m(seed: u64) {
        let noise = common::random_gate_dependent(&group1(), 0.2, &mut ChaCha8Rng::seed_from_u64(seed));
        let g = gamma(&noise).unwrap();
        prop_assert!(g[0] >= 0.0);
        let b: Vec<f64> = (1..6).map(|m| perturbation_bound(2, &g, m).unwrap()).collect();
        prop_assert!(b.windows(2).all(|w| w[0] <= w[1]));
    }
}
