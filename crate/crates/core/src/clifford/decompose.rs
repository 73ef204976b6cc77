use std::fmt;
use std::str::FromStr;

use super::{CliffordElement, PauliKind, PauliOp};
use crate::error::{RbError, Result};
use crate::gf2::BitMatrix;

/// Upper bound constant `c` in `len(decompose(g)) ≤ c · n²`.
///
/// The elimination below spends at most `4(n − i) + 1` gates on qubit `i`
/// plus one Pauli per qubit, i.e. `2n² + 4n ≤ 6n²`.
pub const DECOMPOSITION_LENGTH_CONSTANT: usize = 6;

/// A gate from the generating set `{H, S, CNOT}` or a single-qubit Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(c, t) => vec![c, t],
        }
    }

    pub fn is_pauli(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Y(_) | Gate::Z(_))
    }

    pub fn check(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        if qs.iter().any(|&q| q >= n) {
            return Err(RbError::Contract(format!(
                "gate {self} addresses a qubit outside 0..{n}"
            )));
        }
        if let Gate::Cnot(c, t) = *self {
            if c == t {
                return Err(RbError::Contract(format!("CNOT with control = target = {c}")));
            }
        }
        Ok(())
    }

    /// The gate as an n-qubit Clifford element.
    ///
    /// Panics if a qubit index is out of range; use [`GeneratorSeq::new`] to
    /// validate untrusted input first.
    pub fn element(&self, n: usize) -> CliffordElement {
        self.check(n).expect("gate must fit the register");
        let x = |q| PauliOp::single(n, q, PauliKind::X);
        let z = |q| PauliOp::single(n, q, PauliKind::Z);
        let neg = |mut p: PauliOp| {
            p.scale_phase(2);
            p
        };
        let mut images: Vec<PauliOp> = (0..n).map(x).chain((0..n).map(z)).collect();
        match *self {
            Gate::H(q) => {
                images[q] = z(q);
                images[n + q] = x(q);
            }
            Gate::S(q) => images[q] = PauliOp::single(n, q, PauliKind::Y),
            Gate::Cnot(c, t) => {
                images[c] = x(c).mul(&x(t)).expect("same size");
                images[n + t] = z(c).mul(&z(t)).expect("same size");
            }
            Gate::X(q) => images[n + q] = neg(z(q)),
            Gate::Z(q) => images[q] = neg(x(q)),
            Gate::Y(q) => {
                images[q] = neg(x(q));
                images[n + q] = neg(z(q));
            }
        }
        CliffordElement::from_images(&images).expect("generator images are valid")
    }

    /// Left-multiply a symplectic matrix by this gate's (phase-free) action.
    fn act_on_rows(&self, m: &mut BitMatrix, n: usize) {
        let xor_row = |m: &mut BitMatrix, dst: usize, src: usize| {
            for col in 0..m.cols() {
                if m.get(src, col) {
                    let v = m.get(dst, col);
                    m.set(dst, col, !v);
                }
            }
        };
        match *self {
            Gate::H(q) => {
                for col in 0..m.cols() {
                    let (a, b) = (m.get(q, col), m.get(n + q, col));
                    m.set(q, col, b);
                    m.set(n + q, col, a);
                }
            }
            Gate::S(q) => xor_row(m, n + q, q),
            Gate::Cnot(c, t) => {
                xor_row(m, t, c);
                xor_row(m, n + c, n + t);
            }
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {}
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Cnot(c, t) => write!(f, "CNOT {c} {t}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
        }
    }
}

impl FromStr for Gate {
    type Err = RbError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let idx = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| RbError::Parse(format!("missing qubit index in {s:?}")))?
                .parse()
                .map_err(|_| RbError::Parse(format!("bad qubit index in {s:?}")))
        };
        let gate = match parts.first().copied() {
            Some("H") => Gate::H(idx(1)?),
            Some("S") => Gate::S(idx(1)?),
            Some("X") => Gate::X(idx(1)?),
            Some("Y") => Gate::Y(idx(1)?),
            Some("Z") => Gate::Z(idx(1)?),
            Some("CNOT") => Gate::Cnot(idx(1)?, idx(2)?),
            _ => return Err(RbError::Parse(format!("unknown gate {s:?}"))),
        };
        let arity = if matches!(gate, Gate::Cnot(..)) { 3 } else { 2 };
        if parts.len() != arity {
            return Err(RbError::Parse(format!("trailing tokens in {s:?}")));
        }
        Ok(gate)
    }
}

/// A gate list in time order: `gates[0]` is applied first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSeq {
    n: usize,
    gates: Vec<Gate>,
}

impl GeneratorSeq {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.check(n)?;
        }
        Ok(GeneratorSeq { n, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of gates outside the leading Pauli layer.
    pub fn generator_count(&self) -> usize {
        self.gates.iter().filter(|g| !g.is_pauli()).count()
    }

    /// The Clifford element implemented by the whole sequence.
    pub fn compose(&self) -> CliffordElement {
        self.gates
            .iter()
            .fold(CliffordElement::identity(self.n), |acc, g| {
                g.element(self.n).compose(&acc).expect("same size")
            })
    }

    /// Parse the `;`-separated mnemonic form produced by `Display`.
    pub fn parse(n: usize, line: &str) -> Result<Self> {
        let gates = line
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Gate>>>()?;
        GeneratorSeq::new(n, gates)
    }
}

impl fmt::Display for GeneratorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Decompose a Clifford element into a leading Pauli layer followed by
/// `H`, `S` and `CNOT` gates.
///
/// The symplectic part is reduced to the identity qubit by qubit: the image of
/// `X_i` is cleared of Z components with `H`/`S`, gathered onto qubit `i` with
/// CNOTs, and then the same is done for the image of `Z_i` inside a pair of
/// Hadamards on qubit `i`. Every generator is an involution at the symplectic
/// level, so replaying the reduction backwards reproduces `C`; the remaining
/// sign discrepancy is a Pauli, which is placed first.
pub fn decompose(g: &CliffordElement) -> GeneratorSeq {
    let n = g.num_qubits();
    let mut work = g.matrix().clone();
    let mut reduction: Vec<Gate> = Vec::new();
    let apply = |gate: Gate, work: &mut BitMatrix, reduction: &mut Vec<Gate>| {
        gate.act_on_rows(work, n);
        reduction.push(gate);
    };

    for i in 0..n {
        let xcol = i;
        let zcol = n + i;

        // Image of X_i: drop all Z components.
        for j in i..n {
            if work.get(n + j, xcol) {
                let gate = if work.get(j, xcol) { Gate::S(j) } else { Gate::H(j) };
                apply(gate, &mut work, &mut reduction);
            }
        }
        if !work.get(i, xcol) {
            let j = (i + 1..n)
                .find(|&j| work.get(j, xcol))
                .expect("image of X_i is nonzero on qubits >= i");
            apply(Gate::Cnot(j, i), &mut work, &mut reduction);
        }
        for j in i + 1..n {
            if work.get(j, xcol) {
                apply(Gate::Cnot(i, j), &mut work, &mut reduction);
            }
        }

        let done = (0..2 * n).all(|r| work.get(r, zcol) == (r == zcol));
        if done {
            continue;
        }
        // Image of Z_i, conjugated by H_i so that X_i becomes Z_i and stays put.
        apply(Gate::H(i), &mut work, &mut reduction);
        for j in i..n {
            if work.get(n + j, zcol) {
                let gate = if work.get(j, zcol) { Gate::S(j) } else { Gate::H(j) };
                debug_assert!(j != i || gate == Gate::S(i));
                apply(gate, &mut work, &mut reduction);
            }
        }
        for j in i + 1..n {
            if work.get(j, zcol) {
                apply(Gate::Cnot(i, j), &mut work, &mut reduction);
            }
        }
        apply(Gate::H(i), &mut work, &mut reduction);
    }
    debug_assert_eq!(work, BitMatrix::identity(2 * n));

    reduction.reverse();
    let body = GeneratorSeq { n, gates: reduction };
    let residual = body
        .compose()
        .inverse()
        .compose(g)
        .expect("same size");
    debug_assert_eq!(residual.matrix(), &BitMatrix::identity(2 * n));

    // A Pauli X^a Z^b flips the sign of X_k iff b_k and of Z_k iff a_k.
    let h = residual.signs();
    let mut gates = Vec::with_capacity(n + body.len());
    for k in 0..n {
        match (h.get(n + k), h.get(k)) {
            (true, true) => gates.push(Gate::Y(k)),
            (true, false) => gates.push(Gate::X(k)),
            (false, true) => gates.push(Gate::Z(k)),
            (false, false) => {}
        }
    }
    gates.extend(body.gates);
    GeneratorSeq { n, gates }
}
