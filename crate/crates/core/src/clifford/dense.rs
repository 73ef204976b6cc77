//! Dense matrix realizations for small registers.

use num_complex::Complex64;

use super::{CliffordElement, Gate, GeneratorSeq, PauliOp};
use crate::channels::{pauli_matrix, vec_col, CMatrix, Superoperator};
use crate::error::{RbError, Result};

/// Largest qubit count for which dense superoperators are built (64×64 at n=3).
pub const DEFAULT_DENSE_LIMIT: usize = 3;

fn check_dense(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(RbError::Capacity(format!(
            "dense realization limited to {limit} qubits, got {n}"
        )));
    }
    Ok(())
}

/// `2^n × 2^n` unitary of a single generator; qubit 0 is the most significant
/// tensor factor.
pub fn gate_unitary(gate: &Gate, n: usize) -> Result<CMatrix> {
    check_dense(n, DEFAULT_DENSE_LIMIT)?;
    gate.check(n)?;
    let d = 1usize << n;
    let bit = |b: usize, q: usize| (b >> (n - 1 - q)) & 1;
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut u = CMatrix::zeros(d, d);
    match *gate {
        Gate::Cnot(c, t) => {
            for b in 0..d {
                let out = if bit(b, c) == 1 { b ^ (1 << (n - 1 - t)) } else { b };
                u[(out, b)] = one;
            }
        }
        Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let single = match *gate {
                Gate::H(_) => [h, h, h, -h],
                Gate::S(_) => [one, zero, zero, i],
                Gate::X(_) => [zero, one, one, zero],
                Gate::Y(_) => [zero, -i, i, zero],
                _ => [one, zero, zero, -one],
            };
            let shift = n - 1 - q;
            for b in 0..d {
                let col_bit = (b >> shift) & 1;
                for row_bit in 0..2 {
                    let out = (b & !(1 << shift)) | (row_bit << shift);
                    u[(out, b)] += single[row_bit * 2 + col_bit];
                }
            }
        }
    }
    Ok(u)
}

/// Product of the gate unitaries in time order (last gate leftmost).
pub fn unitary_from_sequence(seq: &GeneratorSeq) -> Result<CMatrix> {
    let n = seq.num_qubits();
    let d = 1usize << n;
    seq.gates()
        .iter()
        .try_fold(CMatrix::identity(d, d), |acc, g| Ok(gate_unitary(g, n)? * acc))
}

/// Superoperator of `ρ ↦ UρU†` for the element, built from Pauli conjugation:
/// `S = (1/d) Σ_j s_j vec(P_{π(j)}) vec(P_j)†` where `g P_j g† = s_j P_{π(j)}`.
pub fn to_superoperator(g: &CliffordElement) -> Result<Superoperator> {
    let n = g.num_qubits();
    check_dense(n, DEFAULT_DENSE_LIMIT)?;
    let d = 1usize << n;
    let mut mat = CMatrix::zeros(d * d, d * d);
    let vecs: Vec<_> = (0..d * d).map(|k| vec_col(&pauli_matrix(n, k))).collect();
    for (j, vj) in vecs.iter().enumerate() {
        let img = g.conjugate_pauli(&PauliOp::from_basis_index(n, j))?;
        let negative = img.is_negative().expect("conjugation preserves Hermiticity");
        let sign = if negative { -1.0 } else { 1.0 };
        let vi = &vecs[img.basis_index()];
        mat += vi * vj.adjoint() * Complex64::new(sign / d as f64, 0.0);
    }
    Superoperator::from_matrix(d, mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::unitary_channel;
    use crate::clifford::{decompose, random_clifford};
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `‖A − e^{iφ}B‖` minimized over the global phase.
    fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
        let overlap = (b.adjoint() * a).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        (a - b * phase).norm()
    }

    #[test]
    fn identity_and_hadamard_superoperators() {
        let id = to_superoperator(&CliffordElement::identity(2)).unwrap();
        assert!(id.max_abs_diff(&Superoperator::identity(4)) < 1e-15);
        let h = to_superoperator(&Gate::H(0).element(1)).unwrap();
        let r = h.real_ptm().unwrap();
        assert!((r[(3, 1)] - 1.0).abs() < 1e-15);
        assert!((r[(1, 3)] - 1.0).abs() < 1e-15);
        assert!((r[(2, 2)] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn superoperator_matches_dense_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=2 {
            for _ in 0..20 {
                let g = random_clifford(n, &mut rng);
                let u = unitary_from_sequence(&decompose(&g)).unwrap();
                let s = to_superoperator(&g).unwrap();
                let diff = s.max_abs_diff(&unitary_channel(&u).unwrap());
                assert!(diff < 1e-12, "n={n} diff={diff} g={g:?} seq={}", decompose(&g));
                let r = s.real_ptm().unwrap();
                let gram = r.transpose() * &r;
                assert!((gram - DMatrix::<f64>::identity(r.nrows(), r.ncols())).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_conjugation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let g = random_clifford(1, &mut rng);
            let u = unitary_from_sequence(&decompose(&g)).unwrap();
            for k in 0..4 {
                let p = PauliOp::from_basis_index(1, k);
                let img = g.conjugate_pauli(&p).unwrap();
                let sign = if img.is_negative().unwrap() { -1.0 } else { 1.0 };
                let expected = pauli_matrix(1, img.basis_index()) * Complex64::new(sign, 0.0);
                let dense = &u * pauli_matrix(1, k) * u.adjoint();
                assert!((dense - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn compose_matches_dense_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let a = random_clifford(1, &mut rng);
            let b = random_clifford(1, &mut rng);
            let ua = unitary_from_sequence(&decompose(&a)).unwrap();
            let ub = unitary_from_sequence(&decompose(&b)).unwrap();
            let uab = unitary_from_sequence(&decompose(&a.compose(&b).unwrap())).unwrap();
            assert!(phase_distance(&uab, &(ua * ub)) < 1e-12);
        }
    }

    #[test]
    fn capacity_guard() {
        let g = CliffordElement::identity(4);
        assert!(matches!(to_superoperator(&g), Err(RbError::Capacity(_))));
    }
}
