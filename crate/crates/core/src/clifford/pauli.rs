use std::fmt;

use crate::error::{RbError, Result};
use crate::gf2::BitVec;

/// An n-qubit Pauli operator `i^phase · X^x · Z^z`.
///
/// `X^x Z^z` is the tensor product over qubits of `X^{x_k} Z^{z_k}`. The phase is
/// an exponent of `i` kept exactly mod 4, so products never lose sign
/// information. A Hermitian Pauli has `phase ≡ x·z (mod 2)`; the canonical
/// Hermitian representative with bits `(x, z)` uses `phase = x·z mod 4`, which
/// makes `Y = i·X·Z`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliOp {
    n: usize,
    x: BitVec,
    z: BitVec,
    phase: u8,
}

/// Single-qubit Pauli letters in basis order `I, X, Y, Z`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    /// Position in the `I, X, Y, Z` ordering.
    pub fn index(self) -> usize {
        match self {
            PauliKind::I => 0,
            PauliKind::X => 1,
            PauliKind::Y => 2,
            PauliKind::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Self {
        [PauliKind::I, PauliKind::X, PauliKind::Y, PauliKind::Z][i & 3]
    }

    fn letter(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            n,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            phase: 0,
        }
    }

    /// `i^phase X^x Z^z` with an explicit phase exponent.
    pub fn new(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(RbError::Shape(format!(
                "x has {} bits but z has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(PauliOp {
            n: x.len(),
            x,
            z,
            phase: phase & 3,
        })
    }

    /// The canonical Hermitian Pauli with bits `(x, z)`, negated if `negative`.
    pub fn hermitian(x: BitVec, z: BitVec, negative: bool) -> Result<Self> {
        let base = (x.and_count(&z) & 3) as u8;
        PauliOp::new(x, z, base + 2 * negative as u8)
    }

    /// A single-qubit Pauli acting on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, kind: PauliKind) -> Self {
        let mut p = PauliOp::identity(n);
        let (x, z) = kind.bits();
        p.x.set(q, x);
        p.z.set(q, z);
        p.phase = (x && z) as u8;
        p
    }

    /// Canonical Hermitian Pauli for a basis index in `I, X, Y, Z` base-4 order,
    /// qubit 0 being the most significant digit.
    pub fn from_basis_index(n: usize, index: usize) -> Self {
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for q in 0..n {
            let digit = (index >> (2 * (n - 1 - q))) & 3;
            let (xb, zb) = PauliKind::from_index(digit).bits();
            x.set(q, xb);
            z.set(q, zb);
        }
        PauliOp::hermitian(x, z, false).expect("lengths agree")
    }

    /// Inverse of [`PauliOp::from_basis_index`], ignoring the phase.
    pub fn basis_index(&self) -> usize {
        (0..self.n).fold(0, |acc, q| {
            acc * 4 + PauliKind::from_bits(self.x.get(q), self.z.get(q)).index()
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn kind_at(&self, q: usize) -> PauliKind {
        PauliKind::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase & 1) == (self.x.and_count(&self.z) & 1) as u8
    }

    /// For a Hermitian Pauli, whether it is minus the canonical representative.
    pub fn is_negative(&self) -> Option<bool> {
        if !self.is_hermitian() {
            return None;
        }
        let base = self.y_count();
        Some((self.phase + 4 - base) & 3 == 2)
    }

    /// Operator product `self · other` with exact phase.
    pub fn mul(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n != other.n {
            return Err(RbError::Shape(format!(
                "cannot multiply {}-qubit and {}-qubit Paulis",
                self.n, other.n
            )));
        }
        // Z^{z1} X^{x2} = (-1)^{z1·x2} X^{x2} Z^{z1}
        let swap = 2 * self.z.dot(&other.x) as u8;
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        Ok(PauliOp {
            n: self.n,
            x,
            z,
            phase: (self.phase + other.phase + swap) & 3,
        })
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliOp) {
        let swap = 2 * self.z.dot(&other.x) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        self.phase = (self.phase + other.phase + swap) & 3;
    }

    /// Symplectic product: `true` iff the two operators anticommute.
    pub fn anticommutes(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Number of Y factors mod 4; the canonical Hermitian phase.
    fn y_count(&self) -> u8 {
        (self.x.and_count(&self.z) & 3) as u8
    }

    pub fn scale_phase(&mut self, extra: u8) {
        self.phase = (self.phase + extra) & 3;
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display as (sign) ⊗ letters, folding the X·Z → Y conversion into the phase.
        let ys = self.y_count();
        let letters_phase = (self.phase + 4 - ys) & 3;
        let prefix = ["+", "+i", "-", "-i"][letters_phase as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.kind_at(q).letter())?;
        }
        Ok(())
    }
}
