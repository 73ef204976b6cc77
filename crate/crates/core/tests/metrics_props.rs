use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rblab::channels::{amplitude_damping, depolarizing, PauliChannel, Superoperator};
use rblab::metrics::{delta_f, min_fidelity_bound, one_one_h_norm, pauli_diamond_distance, OneOneOptions};

fn random_pauli(n: usize, seed: u64) -> PauliChannel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d2 = 1usize << (2 * n);
    let mut q: Vec<f64> = (0..d2).map(|_| rng.random::<f64>()).collect();
    q[0] += d2 as f64 * rng.random::<f64>();
    let total: f64 = q.iter().sum();
    PauliChannel::new(n, q.into_iter().map(|x| x / total).collect()).unwrap()
}

fn diff(a: &Superoperator, b: &Superoperator) -> Superoperator {
    a.sub(b).unwrap()
}

fn fast() -> OneOneOptions {
    OneOneOptions {
        restarts: 16,
        grid_step_degrees: Some(2.0),
        ..OneOneOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_one_h_is_homogeneous(seed: u64, c in 0.1f64..5.0) {
        let delta = diff(&random_pauli(1, seed).to_superoperator(), &random_pauli(1, seed ^ 1).to_superoperator());
        let opts = fast();
        let base = rblab::metrics::one_one_h_norm_with(&delta, &opts).unwrap();
        let scaled = rblab::metrics::one_one_h_norm_with(&delta.scale(c), &opts).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-6 * (1.0 + c * base));
    }

    #[test]
    fn one_one_h_triangle_inequality(a: u64, b: u64) {
        let (x, y, z) = (
            random_pauli(1, a).to_superoperator(),
            random_pauli(1, b).to_superoperator(),
            amplitude_damping(0.3).unwrap(),
        );
        let opts = fast();
        let n = |s: &Superoperator| rblab::metrics::one_one_h_norm_with(s, &opts).unwrap();
        let xz = n(&diff(&x, &z));
        let xy = n(&diff(&x, &y));
        let yz = n(&diff(&y, &z));
        prop_assert!(xz <= xy + yz + 2e-6);
    }

    #[test]
    fn inequality_chain(n in 1usize..=2, a: u64, b: u64) {
        let (p, q) = (random_pauli(n, a), random_pauli(n, b));
        let (sp, sq) = (p.to_superoperator(), q.to_superoperator());
        let df = delta_f(&sp, &sq).unwrap();
        let h = rblab::metrics::one_one_h_norm_with(&diff(&sp, &sq), &fast()).unwrap();
        let dia = pauli_diamond_distance(&p, &q).unwrap();
        prop_assert!(df <= h + 1e-6);
        prop_assert!(h <= dia.distance + 1e-12);
        prop_assert!(dia.certificates.is_tight(1e-10));
    }

    #[test]
    fn diamond_is_a_metric(n in 1usize..=2, a: u64, b: u64, c: u64) {
        let (x, y, z) = (random_pauli(n, a), random_pauli(n, b), random_pauli(n, c));
        let d = |p: &PauliChannel, q: &PauliChannel| pauli_diamond_distance(p, q).unwrap().distance;
        prop_assert!(d(&x, &x).abs() < 1e-15);
        prop_assert!((d(&x, &y) - d(&y, &x)).abs() < 1e-15);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
        prop_assert!(d(&x, &y) <= 2.0 + 1e-12);
    }
}

/// Minimum gate fidelity by brute force over a Bloch-sphere grid.
fn grid_min_fidelity(s: &Superoperator) -> f64 {
    use num_complex::Complex64;
    use rblab::channels::{CMatrix, DensityMatrix};
    let mut best = f64::INFINITY;
    for i in 0..=90 {
        let theta = std::f64::consts::PI * i as f64 / 90.0;
        for j in 0..180 {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / 180.0;
            let psi = nalgebra::DVector::from_vec(vec![
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ]);
            let rho = DensityMatrix::pure(&psi).unwrap();
            let out: CMatrix = s.apply(&rho).unwrap();
            let f = (psi.adjoint() * out * &psi)[(0, 0)].re;
            best = best.min(f);
        }
    }
    best
}

#[test]
fn min_fidelity_bound_is_below_grid_minimum() {
    let id = PauliChannel::identity(1);
    let dep = PauliChannel::depolarizing(1, 0.98).unwrap();
    let bound = min_fidelity_bound(&dep, &id).unwrap();
    assert!((bound.value - 0.97).abs() < 1e-12);
    let fmin = grid_min_fidelity(&dep.to_superoperator());
    assert!((fmin - 0.99).abs() < 1e-9, "grid minimum {fmin}");
    for seed in 0..20 {
        let q = random_pauli(1, seed);
        let b = min_fidelity_bound(&q, &id).unwrap();
        assert!(b.value <= grid_min_fidelity(&q.to_superoperator()) + 1e-12);
        assert_eq!(b.negative, b.value < 0.0);
    }
}

#[test]
fn one_one_h_of_depolarizing_difference() {
    // Δ = (p₁ − p₂)(ρ − Tr ρ 𝟙/d): the norm is |p₁ − p₂| times ‖ψψ† − 𝟙/2‖₁ = 1.
    let a = depolarizing(0.9, 2).unwrap();
    let b = depolarizing(0.7, 2).unwrap();
    let v = one_one_h_norm(&diff(&a, &b)).unwrap();
    assert!((v - 0.2).abs() < 1e-6, "{v}");
}
