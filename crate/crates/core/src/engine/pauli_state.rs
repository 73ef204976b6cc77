//! States and channels in Pauli coordinates `r_k = Tr(P_k X)`.

use nalgebra::{DMatrix, DVector};

use crate::channels::{pauli_matrix, CMatrix};
use crate::clifford::{CliffordElement, PauliOp};
use crate::error::Result;

/// Signed permutation `P_j ↦ s_j P_{π(j)}` of a Clifford on the Pauli basis.
#[derive(Clone, Debug)]
pub(crate) struct PauliAction {
    image: Vec<(usize, f64)>,
}

impl PauliAction {
    pub(crate) fn new(g: &CliffordElement) -> Result<Self> {
        let n = g.num_qubits();
        let image = (0..1usize << (2 * n))
            .map(|j| {
                let img = g.conjugate_pauli(&PauliOp::from_basis_index(n, j))?;
                let s = if img.is_negative().expect("Hermitian image") { -1.0 } else { 1.0 };
                Ok((img.basis_index(), s))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliAction { image })
    }

    pub(crate) fn apply(&self, r: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(r.len());
        for (j, &(k, s)) in self.image.iter().enumerate() {
            out[k] = s * r[j];
        }
        out
    }
}

/// Pauli coordinates of an operator.
pub(crate) fn pauli_coords(n: usize, a: &CMatrix) -> DVector<f64> {
    DVector::from_iterator(
        1 << (2 * n),
        (0..1usize << (2 * n)).map(|k| (pauli_matrix(n, k) * a).trace().re),
    )
}

/// Apply a local PTM on `qubits` (first listed = most significant digit) in place.
pub(crate) fn apply_local_ptm(r: &mut DVector<f64>, ptm: &DMatrix<f64>, qubits: &[usize], n: usize) {
    let k = qubits.len();
    let size = 1usize << (2 * k);
    let strides: Vec<usize> = qubits.iter().map(|&q| 1usize << (2 * (n - 1 - q))).collect();
    let offset = |local: usize| {
        (0..k).fold(0, |acc, i| acc + ((local >> (2 * (k - 1 - i))) & 3) * strides[i])
    };
    let offsets: Vec<usize> = (0..size).map(offset).collect();
    let mut buf = vec![0.0; size];
    for base in 0..r.len() {
        if strides.iter().any(|&s| (base / s) % 4 != 0) {
            continue;
        }
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = r[base + o];
        }
        for (row, &o) in offsets.iter().enumerate() {
            r[base + o] = (0..size).map(|c| ptm[(row, c)] * buf[c]).sum();
        }
    }
}
