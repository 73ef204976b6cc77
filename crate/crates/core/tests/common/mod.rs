#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rblab::channels::{depolarizing, pauli_matrix, unitary_channel, CMatrix, Superoperator};
use rblab::clifford::CliffordGroup;
use rblab::engine::{gamma, NoiseModel, Record, RbDataset};

/// `exp(−iθ n·σ/2)` for a random unit axis `n`.
pub fn random_rotation<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> CMatrix {
    let v: [f64; 3] = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
    let mut gen = CMatrix::zeros(2, 2);
    for (k, x) in v.iter().enumerate() {
        gen += pauli_matrix(1, k + 1) * Complex64::new(x / norm, 0.0);
    }
    CMatrix::identity(2, 2) * Complex64::new((theta / 2.0).cos(), 0.0)
        - gen * Complex64::new(0.0, (theta / 2.0).sin())
}

/// Per-element noise on one qubit: a random small rotation after a random
/// depolarizing channel, both scaled by `strength`.
pub fn random_gate_dependent<R: Rng + ?Sized>(
    group: &Arc<CliffordGroup>,
    strength: f64,
    rng: &mut R,
) -> NoiseModel {
    let channels: Vec<Superoperator> = (0..group.len())
        .map(|_| {
            let u = unitary_channel(&random_rotation(strength * rng.random::<f64>(), rng)).unwrap();
            let dep = depolarizing(1.0 - 0.2 * strength * rng.random::<f64>(), 2).unwrap();
            u.compose(&dep).unwrap()
        })
        .collect();
    NoiseModel::gate_dependent(group.clone(), channels).unwrap()
}

/// Rejection-sample a gate-dependent ensemble with `γ ≤ max_gamma`.
pub fn ensemble_with_gamma_at_most<R: Rng + ?Sized>(
    group: &Arc<CliffordGroup>,
    max_gamma: f64,
    rng: &mut R,
) -> (NoiseModel, f64) {
    loop {
        let strength = 0.02 + 0.2 * rng.random::<f64>();
        let noise = random_gate_dependent(group, strength, rng);
        let g = gamma(&noise).unwrap()[0];
        if g <= max_gamma && g > 0.0 {
            return (noise, g);
        }
    }
}

/// One record per length carrying the given mean.
pub fn curve_dataset(n: usize, ms: &[usize], values: &[f64]) -> RbDataset {
    let records = ms
        .iter()
        .zip(values)
        .map(|(&m, &v)| Record {
            m,
            seq: 0,
            survival: v.clamp(0.0, 1.0),
            successes: None,
            shots: 0,
        })
        .collect();
    RbDataset::new(n, records).unwrap()
}
