//! Symplectic representation of the n-qubit Clifford group.
//!
//! A Clifford element is stored as a pair `(C, h)`:
//!
//! * `C` is a `2n × 2n` binary matrix acting on Pauli bit vectors laid out as
//!   `(x_0 … x_{n-1} | z_0 … z_{n-1})`. Column `k < n` is the image of `X_k`,
//!   column `n + k` is the image of `Z_k`.
//! * `h` has `2n` bits; bit `j` is set when the image of the `j`-th generator is
//!   minus the canonical Hermitian Pauli of column `j`.
//!
//! Group operations are defined through conjugation of the Pauli generators,
//! with phases tracked exactly in [`PauliOp`].

mod codec;
mod decompose;
mod dense;
mod group;
mod pauli;
mod sample;

pub use codec::{decode_element, encode_element};
pub use decompose::{decompose, Gate, GeneratorSeq, DECOMPOSITION_LENGTH_CONSTANT};
pub use dense::{gate_unitary, to_superoperator, unitary_from_sequence, DEFAULT_DENSE_LIMIT};
pub use group::{
    clifford_group_order, single_qubit_pulse_table, symplectic_group_order, CliffordGroup, Pulse,
    PulseTable,
};
pub use pauli::{PauliKind, PauliOp};
pub use sample::{random_clifford, random_symplectic};

use crate::error::{RbError, Result};
use crate::gf2::{BitMatrix, BitVec};

/// The fixed form `Ω = [[0, I_n], [I_n, 0]]` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        SymplecticForm { n }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> BitMatrix {
        let n = self.n;
        let mut m = BitMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m.set(i, n + i, true);
            m.set(n + i, i, true);
        }
        m
    }

    /// `uᵀ Ω v`.
    pub fn inner(&self, u: &BitVec, v: &BitVec) -> bool {
        let n = self.n;
        let mut acc = false;
        for i in 0..n {
            acc ^= (u.get(i) & v.get(n + i)) ^ (u.get(n + i) & v.get(i));
        }
        acc
    }
}

/// `true` iff `Cᵀ Ω C = Ω (mod 2)`.
pub fn is_symplectic(c: &BitMatrix, n: usize) -> Result<bool> {
    if c.rows() != 2 * n || c.cols() != 2 * n {
        return Err(RbError::Shape(format!(
            "expected a {0}x{0} matrix for n={n}, got {1}x{2}",
            2 * n,
            c.rows(),
            c.cols()
        )));
    }
    let form = SymplecticForm::new(n);
    let cols: Vec<BitVec> = (0..2 * n).map(|j| c.column(j)).collect();
    for i in 0..2 * n {
        for j in i..2 * n {
            let expected = j == i + n && i < n;
            if form.inner(&cols[i], &cols[j]) != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An n-qubit Clifford operation modulo global phase.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordElement {
    n: usize,
    c: BitMatrix,
    h: BitVec,
}

impl CliffordElement {
    pub fn identity(n: usize) -> Self {
        CliffordElement {
            n,
            c: BitMatrix::identity(2 * n),
            h: BitVec::zeros(2 * n),
        }
    }

    /// Build from a symplectic matrix and sign vector, validating both.
    pub fn new(n: usize, c: BitMatrix, h: BitVec) -> Result<Self> {
        if h.len() != 2 * n {
            return Err(RbError::Shape(format!(
                "sign vector must have {} bits, got {}",
                2 * n,
                h.len()
            )));
        }
        if !is_symplectic(&c, n)? {
            return Err(RbError::Contract("matrix is not symplectic".into()));
        }
        Ok(CliffordElement { n, c, h })
    }

    pub(crate) fn from_parts_unchecked(n: usize, c: BitMatrix, h: BitVec) -> Self {
        CliffordElement { n, c, h }
    }

    /// Build from the images of `X_0..X_{n-1}, Z_0..Z_{n-1}` (in that order).
    /// Every image must be Hermitian.
    pub fn from_images(images: &[PauliOp]) -> Result<Self> {
        if images.len() % 2 != 0 || images.is_empty() {
            return Err(RbError::Shape("need 2n generator images".into()));
        }
        let n = images.len() / 2;
        let mut c = BitMatrix::zeros(2 * n, 2 * n);
        let mut h = BitVec::zeros(2 * n);
        for (j, img) in images.iter().enumerate() {
            if img.num_qubits() != n {
                return Err(RbError::Shape(format!(
                    "image {j} acts on {} qubits, expected {n}",
                    img.num_qubits()
                )));
            }
            let negative = img
                .is_negative()
                .ok_or_else(|| RbError::Contract(format!("image {j} is not Hermitian")))?;
            for q in 0..n {
                c.set(q, j, img.x().get(q));
                c.set(n + q, j, img.z().get(q));
            }
            h.set(j, negative);
        }
        CliffordElement::new(n, c, h)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.c
    }

    pub fn signs(&self) -> &BitVec {
        &self.h
    }

    pub fn is_identity(&self) -> bool {
        self.c == BitMatrix::identity(2 * self.n) && self.h.is_zero()
    }

    /// Image of generator `j` (`X_j` for `j < n`, `Z_{j-n}` otherwise).
    pub fn image(&self, j: usize) -> PauliOp {
        let n = self.n;
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for q in 0..n {
            x.set(q, self.c.get(q, j));
            z.set(q, self.c.get(n + q, j));
        }
        PauliOp::hermitian(x, z, self.h.get(j)).expect("lengths agree")
    }

    /// `g P g†`, including the sign.
    pub fn conjugate_pauli(&self, p: &PauliOp) -> Result<PauliOp> {
        if p.num_qubits() != self.n {
            return Err(RbError::Shape(format!(
                "Pauli acts on {} qubits, Clifford on {}",
                p.num_qubits(),
                self.n
            )));
        }
        Ok(self.conjugate_unchecked(p))
    }

    fn conjugate_unchecked(&self, p: &PauliOp) -> PauliOp {
        let n = self.n;
        // P = i^e (Π X_k^{x_k}) (Π Z_k^{z_k}); conjugate factor by factor.
        let mut out = PauliOp::identity(n);
        out.scale_phase(p.phase());
        for k in 0..n {
            if p.x().get(k) {
                out.mul_assign_unchecked(&self.image(k));
            }
        }
        for k in 0..n {
            if p.z().get(k) {
                out.mul_assign_unchecked(&self.image(n + k));
            }
        }
        out
    }

    /// The element acting as "apply `other`, then `self`".
    pub fn compose(&self, other: &CliffordElement) -> Result<CliffordElement> {
        if self.n != other.n {
            return Err(RbError::Shape(format!(
                "cannot compose {}-qubit and {}-qubit Cliffords",
                self.n, other.n
            )));
        }
        let images: Vec<PauliOp> = (0..2 * self.n)
            .map(|j| self.conjugate_unchecked(&other.image(j)))
            .collect();
        Ok(self.from_images_unchecked(&images))
    }

    fn from_images_unchecked(&self, images: &[PauliOp]) -> CliffordElement {
        let n = self.n;
        let mut c = BitMatrix::zeros(2 * n, 2 * n);
        let mut h = BitVec::zeros(2 * n);
        for (j, img) in images.iter().enumerate() {
            for q in 0..n {
                c.set(q, j, img.x().get(q));
                c.set(n + q, j, img.z().get(q));
            }
            h.set(j, img.is_negative().expect("conjugation preserves Hermiticity"));
        }
        CliffordElement { n, c, h }
    }

    pub fn inverse(&self) -> CliffordElement {
        let n = self.n;
        // For symplectic C, C⁻¹ = Ω Cᵀ Ω.
        let omega = SymplecticForm::new(n).matrix();
        let c_inv = omega
            .mul(&self.c.transpose())
            .and_then(|m| m.mul(&omega))
            .expect("square matrices of equal size");
        let candidate = CliffordElement {
            n,
            c: c_inv,
            h: BitVec::zeros(2 * n),
        };
        // self ∘ candidate maps each generator to ± itself; flipping the
        // candidate's sign on that generator cancels the minus.
        let probe = self.compose(&candidate).expect("same size");
        CliffordElement {
            n,
            c: candidate.c,
            h: probe.h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> CliffordElement {
        Gate::H(0).element(1)
    }

    #[test]
    fn symplectic_check_examples() {
        let id = BitMatrix::identity(2);
        assert!(is_symplectic(&id, 1).unwrap());
        let swap = BitMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(is_symplectic(&swap, 1).unwrap());
        let singular = BitMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!is_symplectic(&singular, 1).unwrap());
        assert!(matches!(is_symplectic(&id, 2), Err(RbError::Shape(_))));
    }

    #[test]
    fn omega_squares_to_identity() {
        for n in 1..5 {
            let o = SymplecticForm::new(n).matrix();
            assert_eq!(o.mul(&o).unwrap(), BitMatrix::identity(2 * n));
        }
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let h = hadamard();
        let x = PauliOp::single(1, 0, PauliKind::X);
        let z = PauliOp::single(1, 0, PauliKind::Z);
        assert_eq!(h.conjugate_pauli(&x).unwrap(), z);
        assert_eq!(h.conjugate_pauli(&z).unwrap(), x);
        let y = PauliOp::single(1, 0, PauliKind::Y);
        let mut minus_y = y.clone();
        minus_y.scale_phase(2);
        assert_eq!(h.conjugate_pauli(&y).unwrap(), minus_y);
    }

    #[test]
    fn identity_conjugation_is_trivial() {
        let id = CliffordElement::identity(2);
        for idx in 0..16 {
            let p = PauliOp::from_basis_index(2, idx);
            assert_eq!(id.conjugate_pauli(&p).unwrap(), p);
        }
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = hadamard();
        assert_eq!(h.inverse(), h);
        assert!(h.compose(&h).unwrap().is_identity());
        assert!(CliffordElement::identity(3).inverse().is_identity());
    }

    #[test]
    fn s_inverse_is_s_cubed() {
        let s = Gate::S(0).element(1);
        let s3 = s.compose(&s).unwrap().compose(&s).unwrap();
        assert_eq!(s.inverse(), s3);
    }

    #[test]
    fn non_hermitian_image_is_rejected() {
        let mut x = PauliOp::single(1, 0, PauliKind::X);
        x.scale_phase(1);
        let z = PauliOp::single(1, 0, PauliKind::Z);
        assert!(matches!(
            CliffordElement::from_images(&[x, z]),
            Err(RbError::Contract(_))
        ));
    }

    #[test]
    fn commuting_images_are_rejected() {
        let x = PauliOp::single(1, 0, PauliKind::X);
        assert!(CliffordElement::from_images(&[x.clone(), x]).is_err());
    }
}
