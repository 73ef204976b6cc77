use nalgebra::DVector;
use serde::Serialize;

use super::noise::NoiseModel;
use super::pauli_state::{pauli_coords, PauliAction};
use crate::channels::{CMatrix, DensityMatrix};
use crate::clifford::{to_superoperator, CliffordElement, CliffordGroup, Gate};
use crate::error::{RbError, Result};

/// Number of sequences per length for a Hoeffding guarantee.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HoeffdingPlan {
    pub k: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub range: f64,
    /// Set when the request is trivially satisfied and `k = 0`.
    pub warning: Option<String>,
}

/// `k = ⌈ln(2/δ)(b − a)² / (2ε²)⌉` so that the mean of `k` survivals lies
/// within `ε` of its expectation with probability at least `1 − δ`.
pub fn hoeffding_k(epsilon: f64, delta: f64, a: f64, b: f64) -> Result<HoeffdingPlan> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(RbError::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(RbError::Domain(format!("delta must be positive, got {delta}")));
    }
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
        return Err(RbError::Domain(format!(
            "survival range [{a}, {b}] must satisfy 0 <= a <= b <= 1"
        )));
    }
    let range = b - a;
    let plan = |k, warning: Option<&str>| HoeffdingPlan {
        k,
        epsilon,
        delta,
        range,
        warning: warning.map(str::to_string),
    };
    if delta >= 1.0 {
        return Ok(plan(0, Some("delta >= 1: no sequences are needed")));
    }
    if range == 0.0 {
        return Ok(plan(0, Some("zero survival range: no sequences are needed")));
    }
    let k = ((2.0 / delta).ln() * range * range / (2.0 * epsilon * epsilon)).ceil();
    if k >= u64::MAX as f64 {
        return Err(RbError::Capacity(format!("{k:.3e} sequences do not fit in u64")));
    }
    Ok(plan(k as u64, None))
}

/// Default return probability above which a probe counts as suspicious.
pub const PATHOLOGY_THRESHOLD: f64 = 0.5;

/// Outcome of preparing `|0…0⟩`, applying one noisy Clifford that ideally
/// maps it to an orthogonal basis state, and measuring `|0…0⟩⟨0…0|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathologyReport {
    pub probes: usize,
    pub return_probabilities: Vec<f64>,
    pub mean_return: f64,
    pub flagged: usize,
    pub threshold: f64,
    /// A majority of probes returned to `|0…0⟩`.
    pub pathological: bool,
}

/// Cliffords with `C|0…0⟩ ∝ |k⟩`, `k ≠ 0`. All of them for enumerable
/// registers, otherwise the nontrivial X strings.
pub fn pathology_probes(n: usize) -> Result<Vec<CliffordElement>> {
    if let Ok(group) = CliffordGroup::enumerate(n) {
        let d = 1usize << n;
        let zero = DensityMatrix::basis_state(d, 0)?;
        let mut probes = Vec::new();
        for g in group.elements() {
            let out: CMatrix = to_superoperator(g)?.apply(&zero)?;
            let moved = (1..d).any(|k| (out[(k, k)].re - 1.0).abs() < 1e-9);
            if moved {
                probes.push(g.clone());
            }
        }
        return Ok(probes);
    }
    Ok((1usize..1 << n.min(16))
        .map(|mask| {
            (0..n)
                .filter(|q| mask >> q & 1 == 1)
                .fold(CliffordElement::identity(n), |acc, q| {
                    Gate::X(q).element(n).compose(&acc).expect("same register")
                })
        })
        .collect())
}

/// Flag noise that undoes the gates it follows.
pub fn pathology_probe(noise: &NoiseModel, threshold: f64) -> Result<PathologyReport> {
    let n = noise.num_qubits();
    let d = noise.dim();
    let zero = pauli_coords(n, DensityMatrix::basis_state(d, 0)?.matrix());
    let probes = pathology_probes(n)?;
    let return_probabilities = probes
        .iter()
        .map(|g| {
            let out: DVector<f64> = noise.apply_step(g, &PauliAction::new(g)?, 1, &zero)?;
            Ok((zero.dot(&out) / d as f64).clamp(0.0, 1.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    let flagged = return_probabilities.iter().filter(|&&p| p > threshold).count();
    let count = probes.len();
    Ok(PathologyReport {
        probes: count,
        mean_return: return_probabilities.iter().sum::<f64>() / count as f64,
        return_probabilities,
        flagged,
        threshold,
        pathological: 2 * flagged > count,
    })
}
