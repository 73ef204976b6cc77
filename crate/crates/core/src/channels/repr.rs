use nalgebra::DVector;
use num_complex::Complex64;

use super::{
    pauli_matrix, qubits_for_dim, vec_col, CMatrix, Superoperator, PROBABILITY_TOL,
    STRUCTURAL_TOL,
};
use crate::error::{RbError, Result};

/// Kraus operators `{A_k}` of a completely positive map.
#[derive(Clone, Debug)]
pub struct KrausSet {
    d: usize,
    ops: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let d = ops
            .first()
            .ok_or_else(|| RbError::Shape("empty Kraus set".into()))?
            .nrows();
        if ops.iter().any(|a| a.nrows() != d || a.ncols() != d) {
            return Err(RbError::Shape(format!("Kraus operators must all be {d}x{d}")));
        }
        Ok(KrausSet { d, ops })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// `Σ A_k† A_k = 𝟙` within `tol`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let sum = self
            .ops
            .iter()
            .fold(CMatrix::zeros(self.d, self.d), |acc, a| acc + a.adjoint() * a);
        (sum - CMatrix::identity(self.d, self.d)).iter().all(|z| z.norm() <= tol)
    }

    pub fn to_superoperator(&self) -> Superoperator {
        let d2 = self.d * self.d;
        let mat = self
            .ops
            .iter()
            .fold(CMatrix::zeros(d2, d2), |acc, a| acc + a.conjugate().kronecker(a));
        Superoperator::from_matrix(self.d, mat).expect("shape follows from d")
    }
}

/// Generalized Pauli channel `ρ ↦ Σ_k q_k P_k ρ P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    n: usize,
    q: Vec<f64>,
}

impl PauliChannel {
    pub fn new(n: usize, q: Vec<f64>) -> Result<Self> {
        let d2 = 1usize << (2 * n);
        if q.len() != d2 {
            return Err(RbError::Shape(format!(
                "Pauli channel on {n} qubits needs {d2} probabilities, got {}",
                q.len()
            )));
        }
        if q.iter().any(|&x| !x.is_finite() || x < -PROBABILITY_TOL) {
            return Err(RbError::Domain("Pauli probabilities must be non-negative".into()));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(RbError::Domain(format!(
                "Pauli probabilities sum to {total}, expected 1"
            )));
        }
        Ok(PauliChannel { n, q })
    }

    pub fn identity(n: usize) -> Self {
        let mut q = vec![0.0; 1 << (2 * n)];
        q[0] = 1.0;
        PauliChannel { n, q }
    }

    /// The depolarizing channel `pρ + (1 − p)𝟙/d` as Pauli probabilities.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        let d2 = (1usize << (2 * n)) as f64;
        let rest = (1.0 - p) / d2;
        let mut q = vec![rest; 1 << (2 * n)];
        q[0] = ((d2 - 1.0) * p + 1.0) / d2;
        PauliChannel::new(n, q)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.q
    }

    pub fn to_superoperator(&self) -> Superoperator {
        let d = self.dim();
        let mut mat = CMatrix::zeros(d * d, d * d);
        for (k, &qk) in self.q.iter().enumerate() {
            if qk != 0.0 {
                let p = pauli_matrix(self.n, k);
                mat += p.conjugate().kronecker(&p) * Complex64::new(qk, 0.0);
            }
        }
        Superoperator::from_matrix(d, mat).expect("shape follows from n")
    }

    /// Recover the probabilities of a channel that is Pauli-diagonal.
    pub fn from_superoperator(s: &Superoperator) -> Result<Self> {
        let n = qubits_for_dim(s.dim())?;
        let chi = ChiMatrix::from_superoperator(s)?;
        let m = chi.matrix();
        for a in 0..m.nrows() {
            for b in 0..m.ncols() {
                if a != b && m[(a, b)].norm() > STRUCTURAL_TOL {
                    return Err(RbError::Contract("channel is not a Pauli channel".into()));
                }
            }
        }
        let q = (0..m.nrows()).map(|a| m[(a, a)].re.max(0.0)).collect();
        PauliChannel::new(n, q)
    }
}

/// Process matrix in the (unnormalized) Pauli basis:
/// `Φ(ρ) = Σ_ab χ_ab P_a ρ P_b`.
#[derive(Clone, Debug)]
pub struct ChiMatrix {
    n: usize,
    chi: CMatrix,
}

impl ChiMatrix {
    pub fn from_superoperator(s: &Superoperator) -> Result<Self> {
        let n = qubits_for_dim(s.dim())?;
        let d = s.dim();
        let j = s.choi();
        let basis: Vec<DVector<Complex64>> =
            (0..d * d).map(|k| vec_col(&pauli_matrix(n, k))).collect();
        let norm = Complex64::new((d * d) as f64, 0.0);
        let chi = CMatrix::from_fn(d * d, d * d, |a, b| {
            (basis[a].adjoint() * &j * &basis[b])[(0, 0)] / norm
        });
        Ok(ChiMatrix { n, chi })
    }

    pub fn to_superoperator(&self) -> Superoperator {
        let d = 1usize << self.n;
        let paulis: Vec<CMatrix> = (0..d * d).map(|k| pauli_matrix(self.n, k)).collect();
        let mut mat = CMatrix::zeros(d * d, d * d);
        for a in 0..d * d {
            for b in 0..d * d {
                let c = self.chi[(a, b)];
                if c.norm() != 0.0 {
                    mat += paulis[b].transpose().kronecker(&paulis[a]) * c;
                }
            }
        }
        Superoperator::from_matrix(d, mat).expect("shape follows from n")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.chi
    }

    pub fn element(&self, a: usize, b: usize) -> Complex64 {
        self.chi[(a, b)]
    }
}

/// A validated quantum state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(RbError::Shape("density matrix must be square".into()));
        }
        if (rho.trace() - Complex64::new(1.0, 0.0)).norm() > PROBABILITY_TOL {
            return Err(RbError::Contract(format!(
                "density matrix has trace {}",
                rho.trace()
            )));
        }
        if (&rho - rho.adjoint()).iter().any(|z| z.norm() > STRUCTURAL_TOL) {
            return Err(RbError::Contract("density matrix is not Hermitian".into()));
        }
        let min = super::hermitian_eigenvalues(&rho).min();
        if min < -STRUCTURAL_TOL {
            return Err(RbError::Contract(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix { rho })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ` (normalization is enforced).
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(RbError::Domain("zero state vector".into()));
        }
        let v = psi / Complex64::new(norm, 0.0);
        DensityMatrix::new(&v * v.adjoint())
    }

    pub fn basis_state(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(RbError::Shape(format!("basis index {k} out of range for d={d}")));
        }
        let mut rho = CMatrix::zeros(d, d);
        rho[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { rho })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix {
            rho: CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, depolarizing};

    #[test]
    fn depolarizing_pauli_probabilities() {
        let q = PauliChannel::depolarizing(1, 0.9).unwrap();
        let expected = [0.925, 0.025, 0.025, 0.025];
        for (a, b) in q.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let s = q.to_superoperator();
        assert!(s.max_abs_diff(&depolarizing(0.9, 2).unwrap()) < 1e-14);
        let back = PauliChannel::from_superoperator(&s).unwrap();
        assert!(back.probs().iter().zip(q.probs()).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn pauli_channel_validation() {
        assert!(PauliChannel::new(1, vec![0.5, 0.5, 0.0]).is_err());
        assert!(PauliChannel::new(1, vec![1.1, -0.1, 0.0, 0.0]).is_err());
        assert!(PauliChannel::new(1, vec![0.5, 0.4, 0.0, 0.0]).is_err());
        assert!(PauliChannel::from_superoperator(&amplitude_damping(0.2).unwrap()).is_err());
    }

    #[test]
    fn chi_round_trip() {
        let ad = amplitude_damping(0.25).unwrap();
        let chi = ChiMatrix::from_superoperator(&ad).unwrap();
        assert!(chi.to_superoperator().max_abs_diff(&ad) < 1e-14);
        let tr: Complex64 = chi.matrix().trace();
        assert!((tr.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2, 2)).is_err());
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 0)] = Complex64::new(1.5, 0.0);
        bad[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(bad).is_err());
        let plus = DVector::from_vec(vec![Complex64::new(1.0, 0.0); 2]);
        let rho = DensityMatrix::pure(&plus).unwrap();
        assert!((rho.matrix()[(0, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kraus_trace_preservation() {
        let k = amplitude_damping(0.4).unwrap().to_kraus().unwrap();
        assert!(k.is_trace_preserving(1e-10));
        let half = KrausSet::new(vec![CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0)]).unwrap();
        assert!(!half.is_trace_preserving(1e-10));
    }
}
