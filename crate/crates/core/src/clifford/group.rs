use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{is_symplectic, CliffordElement, PauliKind, PauliOp};
use crate::error::{RbError, Result};
use crate::gf2::{BitMatrix, BitVec};

/// `|Sp(2n, 2)| = 2^{n²} Π_{j=1}^{n} (4^j − 1)`, or `None` on overflow.
pub fn symplectic_group_order(n: usize) -> Option<u128> {
    let mut order: u128 = 1u128.checked_shl((n * n) as u32)?;
    for j in 1..=n {
        let factor = 1u128.checked_shl(2 * j as u32)? - 1;
        order = order.checked_mul(factor)?;
    }
    Some(order)
}

/// Size of the Clifford group modulo phases: `|Sp(2n, 2)| · 4^n`.
pub fn clifford_group_order(n: usize) -> Option<u128> {
    symplectic_group_order(n)?.checked_mul(1u128.checked_shl(2 * n as u32)?)
}

/// The full Clifford group for `n ≤ 2`, enumerated in a fixed order.
///
/// Symplectic matrices are found by filtering every `2n × 2n` binary matrix
/// (taken in increasing row-major bit order); each is paired with all `4^n`
/// sign vectors in increasing order. Element indices are therefore stable
/// across runs.
#[derive(Clone, Debug)]
pub struct CliffordGroup {
    n: usize,
    elements: Vec<CliffordElement>,
    index: HashMap<CliffordElement, usize>,
}

/// Largest register for which full enumeration is offered.
pub const MAX_ENUMERATED_QUBITS: usize = 2;

impl CliffordGroup {
    pub fn enumerate(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ENUMERATED_QUBITS {
            return Err(RbError::Capacity(format!(
                "group enumeration supports 1..={MAX_ENUMERATED_QUBITS} qubits, got {n}"
            )));
        }
        let dim = 2 * n;
        let bits = dim * dim;
        let mut elements = Vec::new();
        for code in 0u64..(1u64 << bits) {
            let mut c = BitMatrix::zeros(dim, dim);
            for k in 0..bits {
                // most significant bit = entry (0, 0)
                if (code >> (bits - 1 - k)) & 1 == 1 {
                    c.set(k / dim, k % dim, true);
                }
            }
            if !is_symplectic(&c, n)? {
                continue;
            }
            for hcode in 0u64..(1u64 << dim) {
                let mut h = BitVec::zeros(dim);
                for k in 0..dim {
                    h.set(k, (hcode >> (dim - 1 - k)) & 1 == 1);
                }
                elements.push(CliffordElement::from_parts_unchecked(n, c.clone(), h));
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(CliffordGroup { n, elements, index })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CliffordElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &CliffordElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &CliffordElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `true` iff `list` contains every group element exactly once.
    pub fn is_complete_list(&self, list: &[CliffordElement]) -> bool {
        if list.len() != self.len() {
            return false;
        }
        let mut seen = vec![false; self.len()];
        for g in list {
            match self.index_of(g) {
                Some(i) if !seen[i] => seen[i] = true,
                _ => return false,
            }
        }
        true
    }
}

/// Single-qubit control pulses: idle, ±π/2 rotations about x and y, and π
/// rotations about x and y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pulse {
    Idle,
    X90,
    Xm90,
    Y90,
    Ym90,
    X180,
    Y180,
}

impl Pulse {
    pub const ROTATIONS: [Pulse; 6] = [
        Pulse::X90,
        Pulse::Xm90,
        Pulse::Y90,
        Pulse::Ym90,
        Pulse::X180,
        Pulse::Y180,
    ];

    /// Conjugation action as a one-qubit Clifford element.
    pub fn element(self) -> CliffordElement {
        let p = |k, negative: bool| {
            let mut op = PauliOp::single(1, 0, k);
            if negative {
                op.scale_phase(2);
            }
            op
        };
        use PauliKind::*;
        let (x_img, z_img) = match self {
            Pulse::Idle => (p(X, false), p(Z, false)),
            Pulse::X90 => (p(X, false), p(Y, true)),
            Pulse::Xm90 => (p(X, false), p(Y, false)),
            Pulse::Y90 => (p(Z, true), p(X, false)),
            Pulse::Ym90 => (p(Z, false), p(X, true)),
            Pulse::X180 => (p(X, false), p(Z, true)),
            Pulse::Y180 => (p(X, true), p(Z, true)),
        };
        CliffordElement::from_images(&[x_img, z_img]).expect("valid single-qubit images")
    }

    /// The pulse as a 2×2 unitary `exp(-i θ P / 2)`.
    pub fn unitary(self) -> DMatrix<Complex64> {
        let (axis, angle) = match self {
            Pulse::Idle => (PauliKind::I, 0.0),
            Pulse::X90 => (PauliKind::X, std::f64::consts::FRAC_PI_2),
            Pulse::Xm90 => (PauliKind::X, -std::f64::consts::FRAC_PI_2),
            Pulse::Y90 => (PauliKind::Y, std::f64::consts::FRAC_PI_2),
            Pulse::Ym90 => (PauliKind::Y, -std::f64::consts::FRAC_PI_2),
            Pulse::X180 => (PauliKind::X, std::f64::consts::PI),
            Pulse::Y180 => (PauliKind::Y, std::f64::consts::PI),
        };
        let pauli = crate::channels::pauli_matrix(1, axis.index());
        let id = DMatrix::<Complex64>::identity(2, 2);
        id * Complex64::new((angle / 2.0).cos(), 0.0)
            - pauli * Complex64::new(0.0, (angle / 2.0).sin())
    }
}

/// Minimal-length pulse words for all 24 one-qubit Cliffords.
#[derive(Clone, Debug)]
pub struct PulseTable {
    pub entries: Vec<(CliffordElement, Vec<Pulse>)>,
}

impl PulseTable {
    pub fn average_length(&self) -> f64 {
        let total: usize = self.entries.iter().map(|(_, w)| w.len()).sum();
        total as f64 / self.entries.len() as f64
    }
}

/// Breadth-first search over pulse words, shortest word first.
///
/// Words are in time order. The identity is realized by a single idle pulse,
/// so every element costs at least one pulse slot.
pub fn single_qubit_pulse_table() -> PulseTable {
    let id = CliffordElement::identity(1);
    let mut words: HashMap<CliffordElement, Vec<Pulse>> = HashMap::new();
    words.insert(id.clone(), vec![Pulse::Idle]);
    let mut queue = VecDeque::from([(id, Vec::<Pulse>::new())]);
    while let Some((g, word)) = queue.pop_front() {
        for pulse in Pulse::ROTATIONS {
            let next = pulse.element().compose(&g).expect("one qubit");
            if words.contains_key(&next) {
                continue;
            }
            let mut w = word.clone();
            w.push(pulse);
            words.insert(next.clone(), w.clone());
            queue.push_back((next, w));
        }
    }
    let group = CliffordGroup::enumerate(1).expect("one qubit");
    let entries = group
        .elements()
        .iter()
        .map(|g| (g.clone(), words[g].clone()))
        .collect();
    PulseTable { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(symplectic_group_order(1), Some(6));
        assert_eq!(symplectic_group_order(2), Some(720));
        assert_eq!(clifford_group_order(1), Some(24));
        assert_eq!(clifford_group_order(2), Some(11520));
        assert_eq!(clifford_group_order(3), Some(92897280));
    }

    #[test]
    fn enumeration_sizes_and_lookup() {
        let g1 = CliffordGroup::enumerate(1).unwrap();
        assert_eq!(g1.len(), 24);
        for (i, g) in g1.elements().iter().enumerate() {
            assert_eq!(g1.index_of(g), Some(i));
        }
        assert!(g1.is_complete_list(g1.elements()));
        assert!(!g1.is_complete_list(&g1.elements()[1..]));
        assert!(matches!(CliffordGroup::enumerate(3), Err(RbError::Capacity(_))));
    }

    #[test]
    fn pulse_table_covers_group() {
        let table = single_qubit_pulse_table();
        assert_eq!(table.entries.len(), 24);
        for (g, word) in &table.entries {
            let built = word
                .iter()
                .fold(CliffordElement::identity(1), |acc, p| {
                    p.element().compose(&acc).unwrap()
                });
            assert_eq!(&built, g);
        }
    }
}
