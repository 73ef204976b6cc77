//! Dense quantum channels for small Hilbert dimensions.
//!
//! Operators are vectorized by stacking columns, so `vec(A)[a + d·b] = A[a, b]`
//! and the map `ρ ↦ KρK†` has superoperator `conj(K) ⊗ K`. The Choi matrix is
//! `J = Σ_ij E_ij ⊗ Φ(E_ij)` with the input factor first. The Pauli basis is
//! ordered `I, X, Y, Z` per qubit with qubit 0 as the most significant factor.

mod json;
mod repr;

pub use json::{ChannelJson, ChannelRepr};
pub(crate) use json::parse_matrix;
pub use repr::{ChiMatrix, DensityMatrix, KrausSet, PauliChannel};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::clifford::{clifford_group_order, to_superoperator, CliffordElement};
use crate::error::{RbError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for structural identities (trace preservation, Hermiticity, CP).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for probability normalization.
pub const PROBABILITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Number of qubits `n` with `2^n = d`.
pub fn qubits_for_dim(d: usize) -> Result<usize> {
    if d >= 2 && d.is_power_of_two() {
        Ok(d.trailing_zeros() as usize)
    } else {
        Err(RbError::Shape(format!("dimension {d} is not a power of two")))
    }
}

/// Dense `2^n × 2^n` matrix of the Pauli basis element `idx`.
pub fn pauli_matrix(n: usize, idx: usize) -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    let single = |k: usize| -> CMatrix {
        match k {
            0 => CMatrix::identity(2, 2),
            1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            2 => CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
            _ => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    };
    (0..n).fold(CMatrix::identity(1, 1), |acc, q| {
        let digit = (idx >> (2 * (n - 1 - q))) & 3;
        acc.kronecker(&single(digit))
    })
}

/// Column-stacking vectorization.
pub fn vec_col(a: &CMatrix) -> DVector<Complex64> {
    DVector::from_column_slice(a.as_slice())
}

/// Inverse of [`vec_col`] for a `d × d` operator.
pub fn unvec(v: &DVector<Complex64>, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

/// `[[Re H, −Im H], [Im H, Re H]]`: each eigenvalue of `H` appears twice, with
/// eigenvectors `[u; v]` ↔ `u + iv`. Solving the real problem sidesteps the
/// complex solver, which returns NaN on matrices with subnormal entries.
fn real_embedding(h: &CMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Eigenvalues of the Hermitian part of `h`, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> DVector<f64> {
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = real_embedding(&herm).symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(f64::total_cmp);
    DVector::from_iterator(h.nrows(), ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])))
}

/// Full decomposition of the Hermitian part of `h`. The doubled real
/// eigenvectors are reduced to a complex basis by pivoted Gram-Schmidt.
pub fn hermitian_eigen(h: &CMatrix) -> HermitianEigen {
    let n = h.nrows();
    let herm = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = real_embedding(&herm).symmetric_eigen();
    let mut candidates: Vec<DVector<Complex64>> = (0..2 * n)
        .map(|k| {
            let c = eig.eigenvectors.column(k);
            DVector::from_fn(n, |i, _| Complex64::new(c[i], c[i + n]))
        })
        .collect();
    let mut pairs: Vec<(f64, DVector<Complex64>)> = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..candidates.len())
            .max_by(|&a, &b| candidates[a].norm().total_cmp(&candidates[b].norm()))
            .expect("2n candidates for n picks");
        let v = candidates.swap_remove(best);
        let y = v.unscale(v.norm());
        for r in candidates.iter_mut() {
            let c = y.dotc(r);
            *r -= &y * c;
        }
        let lambda = y.dotc(&(&herm * &y)).re;
        pairs.push((lambda, y));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    HermitianEigen {
        eigenvalues: DVector::from_iterator(n, pairs.iter().map(|p| p.0)),
        eigenvectors: vectors,
    }
}

/// A linear map on `d × d` operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    d: usize,
    mat: CMatrix,
}

impl Superoperator {
    pub fn identity(d: usize) -> Self {
        Superoperator {
            d,
            mat: CMatrix::identity(d * d, d * d),
        }
    }

    pub fn zero(d: usize) -> Self {
        Superoperator {
            d,
            mat: CMatrix::zeros(d * d, d * d),
        }
    }

    pub fn from_matrix(d: usize, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != d * d || mat.ncols() != d * d {
            return Err(RbError::Shape(format!(
                "superoperator for d={d} must be {0}x{0}, got {1}x{2}",
                d * d,
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Superoperator { d, mat })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    fn check_same_dim(&self, other: &Superoperator) -> Result<()> {
        if self.d != other.d {
            return Err(RbError::Shape(format!(
                "channel dimensions differ: {} vs {}",
                self.d, other.d
            )));
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Superoperator {
            d: self.d,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Superoperator {
            d: self.d,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Superoperator) -> Result<Superoperator> {
        self.check_same_dim(other)?;
        Ok(Superoperator {
            d: self.d,
            mat: &self.mat - &other.mat,
        })
    }

    pub fn scale(&self, factor: f64) -> Superoperator {
        Superoperator {
            d: self.d,
            mat: &self.mat * Complex64::new(factor, 0.0),
        }
    }

    /// The Hilbert–Schmidt adjoint (Heisenberg picture) map.
    pub fn adjoint(&self) -> Superoperator {
        Superoperator {
            d: self.d,
            mat: self.mat.adjoint(),
        }
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        if self.d != other.d {
            return f64::INFINITY;
        }
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    pub fn apply_operator(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.nrows() != self.d || a.ncols() != self.d {
            return Err(RbError::Shape(format!(
                "operator must be {0}x{0}, got {1}x{2}",
                self.d,
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(unvec(&(&self.mat * vec_col(a)), self.d))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        self.apply_operator(rho.matrix())
    }

    /// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`.
    pub fn choi(&self) -> CMatrix {
        let d = self.d;
        CMatrix::from_fn(d * d, d * d, |r, c| {
            let (i, k) = (r / d, r % d);
            let (j, l) = (c / d, c % d);
            self.mat[(k + d * l, i + d * j)]
        })
    }

    pub fn from_choi(d: usize, j: &CMatrix) -> Result<Superoperator> {
        if j.nrows() != d * d || j.ncols() != d * d {
            return Err(RbError::Shape(format!(
                "Choi matrix for d={d} must be {0}x{0}",
                d * d
            )));
        }
        let mat = CMatrix::from_fn(d * d, d * d, |r, c| {
            let (k, l) = (r % d, r / d);
            let (i, jj) = (c % d, c / d);
            j[(i * d + k, jj * d + l)]
        });
        Ok(Superoperator { d, mat })
    }

    /// `R_ij = Tr(P_i Φ(P_j)) / d` in the Pauli basis.
    pub fn pauli_transfer_matrix(&self) -> Result<CMatrix> {
        let n = qubits_for_dim(self.d)?;
        let t = pauli_basis_change(n);
        Ok(t.adjoint() * &self.mat * t)
    }

    /// Real Pauli transfer matrix; fails unless the map preserves Hermiticity.
    pub fn real_ptm(&self) -> Result<DMatrix<f64>> {
        let r = self.pauli_transfer_matrix()?;
        if r.iter().any(|z| z.im.abs() > STRUCTURAL_TOL) {
            return Err(RbError::Contract("map is not Hermiticity-preserving".into()));
        }
        Ok(r.map(|z| z.re))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let d = self.d;
        (0..d).all(|i| {
            (0..d).all(|j| {
                let s: Complex64 = (0..d).map(|k| self.mat[(k + d * k, i + d * j)]).sum();
                let expected = if i == j { ONE } else { ZERO };
                (s - expected).norm() <= tol
            })
        })
    }

    /// `Φ(A)† = Φ(A†)` for all `A`, i.e. a Hermitian Choi matrix.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        let j = self.choi();
        (&j - j.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    /// Smallest Choi eigenvalue; only meaningful for Hermiticity-preserving maps.
    pub fn min_choi_eigenvalue(&self) -> f64 {
        let j = self.choi();
        let herm = (&j + j.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian_eigenvalues(&herm).min()
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.is_hermiticity_preserving(tol) && self.min_choi_eigenvalue() >= -tol
    }

    pub fn is_cptp(&self) -> bool {
        self.is_trace_preserving(STRUCTURAL_TOL) && self.is_completely_positive(STRUCTURAL_TOL)
    }

    /// Contract error unless the map is CPTP.
    pub fn check_cptp(&self) -> Result<()> {
        if !self.is_trace_preserving(STRUCTURAL_TOL) {
            return Err(RbError::Contract("channel is not trace-preserving".into()));
        }
        if !self.is_completely_positive(STRUCTURAL_TOL) {
            return Err(RbError::Contract(format!(
                "channel is not completely positive (min Choi eigenvalue {:.3e})",
                self.min_choi_eigenvalue()
            )));
        }
        Ok(())
    }

    /// Canonical Kraus operators from the Choi eigendecomposition.
    pub fn to_kraus(&self) -> Result<KrausSet> {
        if !self.is_completely_positive(STRUCTURAL_TOL) {
            return Err(RbError::Contract(
                "Kraus form requires a completely positive map".into(),
            ));
        }
        let d = self.d;
        let j = self.choi();
        let eig = hermitian_eigen(&j);
        let mut ops = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= STRUCTURAL_TOL {
                continue;
            }
            let v = eig.eigenvectors.column(k) * Complex64::new(lambda.sqrt(), 0.0);
            ops.push(CMatrix::from_column_slice(d, d, v.as_slice()));
        }
        if ops.is_empty() {
            ops.push(CMatrix::zeros(d, d));
        }
        KrausSet::new(ops)
    }

    /// `p` in the twirled channel `pρ + (1 − p)Tr(ρ)𝟙/d`: `(Tr S − 1)/(d² − 1)`.
    pub fn depolarizing_parameter(&self) -> f64 {
        let d2 = (self.d * self.d) as f64;
        (self.trace().re - 1.0) / (d2 - 1.0)
    }
}

/// Unitary `T` with columns `vec(P_k)/√d`; maps Pauli-basis coordinates to
/// column-stacked coordinates.
pub(crate) fn pauli_basis_change(n: usize) -> CMatrix {
    let d = 1usize << n;
    let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut t = CMatrix::zeros(d * d, d * d);
    for k in 0..d * d {
        let v = vec_col(&pauli_matrix(n, k)) * scale;
        t.set_column(k, &v);
    }
    t
}

/// `Λ(ρ) = pρ + (1 − p)Tr(ρ)𝟙/d`, CP for `p ∈ [−1/(d²−1), 1]`.
pub fn depolarizing(p: f64, d: usize) -> Result<Superoperator> {
    if d < 2 {
        return Err(RbError::Shape(format!("dimension must be at least 2, got {d}")));
    }
    let lower = -1.0 / ((d * d) as f64 - 1.0);
    if !p.is_finite() || p < lower - PROBABILITY_TOL || p > 1.0 + PROBABILITY_TOL {
        return Err(RbError::Domain(format!(
            "depolarizing parameter {p} outside the CP range [{lower}, 1]"
        )));
    }
    let id = vec_col(&CMatrix::identity(d, d));
    let mat = CMatrix::identity(d * d, d * d) * Complex64::new(p, 0.0)
        + &id * id.transpose() * Complex64::new((1.0 - p) / d as f64, 0.0);
    Ok(Superoperator { d, mat })
}

/// The map sending every state to `𝟙/d`.
pub fn totally_depolarizing(d: usize) -> Result<Superoperator> {
    depolarizing(0.0, d)
}

/// Single-qubit amplitude damping with decay probability `gamma`.
pub fn amplitude_damping(gamma: f64) -> Result<Superoperator> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(RbError::Domain(format!(
            "damping probability {gamma} outside [0, 1]"
        )));
    }
    let k0 = CMatrix::from_row_slice(
        2,
        2,
        &[ONE, ZERO, ZERO, Complex64::new((1.0 - gamma).sqrt(), 0.0)],
    );
    let k1 = CMatrix::from_row_slice(2, 2, &[ZERO, Complex64::new(gamma.sqrt(), 0.0), ZERO, ZERO]);
    Ok(KrausSet::new(vec![k0, k1])?.to_superoperator())
}

/// `ρ ↦ UρU†`.
pub fn unitary_channel(u: &CMatrix) -> Result<Superoperator> {
    if u.nrows() != u.ncols() {
        return Err(RbError::Shape("unitary must be square".into()));
    }
    Ok(Superoperator {
        d: u.nrows(),
        mat: u.conjugate().kronecker(u),
    })
}

pub fn kraus_to_super(k: &KrausSet) -> Superoperator {
    k.to_superoperator()
}

pub fn super_to_choi(s: &Superoperator) -> CMatrix {
    s.choi()
}

pub fn pauli_channel_to_super(q: &PauliChannel) -> Superoperator {
    q.to_superoperator()
}

pub fn compose(a: &Superoperator, b: &Superoperator) -> Result<Superoperator> {
    a.compose(b)
}

pub fn apply(s: &Superoperator, rho: &DensityMatrix) -> Result<CMatrix> {
    s.apply(rho)
}

/// `χ₀₀ = Tr(S)/d²`, the identity component of the process matrix.
pub fn chi00(s: &Superoperator) -> Result<f64> {
    if !s.is_trace_preserving(STRUCTURAL_TOL) {
        return Err(RbError::Contract("χ₀₀ requires a trace-preserving map".into()));
    }
    let d2 = (s.d * s.d) as f64;
    Ok(s.trace().re / d2)
}

/// Average gate fidelity to the identity, `(dχ₀₀ + 1)/(d + 1)`.
pub fn average_fidelity(s: &Superoperator) -> Result<f64> {
    let d = s.d as f64;
    Ok((d * chi00(s)? + 1.0) / (d + 1.0))
}

/// `r = 1 − F̄`.
pub fn error_rate(s: &Superoperator) -> Result<f64> {
    Ok(1.0 - average_fidelity(s)?)
}

/// Pauli error rate `(d + 1)r/d`.
pub fn pauli_error_rate(r: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(RbError::Domain(format!("error rate {r} outside [0, 1]")));
    }
    Ok((d as f64 + 1.0) * r / d as f64)
}

/// Exact Clifford twirl `(1/|G|) Σ_j C_j ∘ Λ ∘ C_j†`.
///
/// `group` must list every element of the n-qubit Clifford group exactly once.
pub fn twirl_exact(s: &Superoperator, group: &[CliffordElement]) -> Result<Superoperator> {
    let n = qubits_for_dim(s.d)?;
    if group.iter().any(|g| g.num_qubits() != n) {
        return Err(RbError::Shape(format!("twirl group must act on {n} qubits")));
    }
    let order = clifford_group_order(n).unwrap_or(u128::MAX);
    let distinct: std::collections::HashSet<&CliffordElement> = group.iter().collect();
    if group.len() as u128 != order || distinct.len() != group.len() {
        return Err(RbError::Contract(format!(
            "twirl needs all {order} Clifford elements, got {} ({} distinct)",
            group.len(),
            distinct.len()
        )));
    }
    let mut acc = CMatrix::zeros(s.d * s.d, s.d * s.d);
    for g in group {
        let c = to_superoperator(g)?;
        acc += c.matrix() * &s.mat * c.matrix().adjoint();
    }
    Ok(Superoperator {
        d: s.d,
        mat: acc / Complex64::new(group.len() as f64, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::CliffordGroup;

    fn max_norm(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn reconstruct(e: &HermitianEigen) -> CMatrix {
        let diag = CMatrix::from_diagonal(&e.eigenvalues.map(|x| Complex64::new(x, 0.0)));
        &e.eigenvectors * diag * e.eigenvectors.adjoint()
    }

    #[test]
    fn hermitian_eigen_survives_subnormal_entries() {
        // A rank-one Choi matrix whose entries underflow during reduction.
        let theta: f64 = -4.187470752096881e-2;
        let u1 = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::from_polar(1.0, -theta / 2.0), ZERO, ZERO, Complex64::from_polar(1.0, theta / 2.0)],
        );
        let u = u1.kronecker(&u1);
        let j = unitary_channel(&u).unwrap().choi();
        let ev = hermitian_eigenvalues(&j);
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!(ev.min() > -1e-12 && (ev.max() - 4.0).abs() < 1e-12);
        let e = hermitian_eigen(&j);
        assert!(max_norm(&(reconstruct(&e) - &j)) < 1e-12);
        assert!(max_norm(&(e.eigenvectors.adjoint() * &e.eigenvectors - CMatrix::identity(16, 16))) < 1e-12);
    }

    #[test]
    fn hermitian_eigen_handles_degenerate_spectra() {
        let y = pauli_matrix(1, 2);
        let h = pauli_matrix(2, 0) + y.kronecker(&y) * Complex64::new(0.5, 0.0);
        let e = hermitian_eigen(&h);
        assert!(max_norm(&(reconstruct(&e) - &h)) < 1e-12);
        let expected = [0.5, 0.5, 1.5, 1.5];
        for (a, b) in e.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let a = CMatrix::from_fn(5, 5, |r, c| Complex64::new((r * 3 + c) as f64 % 7.0, (r as f64 - c as f64) * 0.3));
        let e = hermitian_eigen(&a);
        let herm = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        assert!(max_norm(&(reconstruct(&e) - herm)) < 1e-10);
    }

    #[test]
    fn depolarizing_endpoints() {
        assert!(depolarizing(1.0, 2).unwrap().max_abs_diff(&Superoperator::identity(2)) < 1e-15);
        let rho = DensityMatrix::basis_state(2, 0).unwrap();
        let out = depolarizing(0.0, 2).unwrap().apply(&rho).unwrap();
        assert!((out - CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(matches!(depolarizing(1.1, 2), Err(RbError::Domain(_))));
        assert!(matches!(depolarizing(-0.5, 2), Err(RbError::Domain(_))));
        assert!(depolarizing(-1.0 / 3.0, 2).unwrap().is_cptp());
    }

    #[test]
    fn fidelity_and_rates() {
        let dep = depolarizing(0.9, 2).unwrap();
        assert!((average_fidelity(&dep).unwrap() - 0.95).abs() < 1e-12);
        assert!((error_rate(&dep).unwrap() - 0.05).abs() < 1e-12);
        assert!((chi00(&dep).unwrap() - 0.925).abs() < 1e-12);
        assert!((chi00(&depolarizing(0.0, 2).unwrap()).unwrap() - 0.25).abs() < 1e-12);
        assert!((chi00(&Superoperator::identity(2)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(error_rate(&Superoperator::identity(2)).unwrap(), 0.0);
        assert!((pauli_error_rate(0.05, 2).unwrap() - 0.075).abs() < 1e-15);
        assert!(matches!(
            average_fidelity(&Superoperator::zero(2)),
            Err(RbError::Contract(_))
        ));
    }

    #[test]
    fn unitary_against_itself_is_perfect() {
        let u = crate::clifford::Pulse::X90.unitary();
        let e = unitary_channel(&u).unwrap();
        let lambda = unitary_channel(&u.adjoint()).unwrap().compose(&e).unwrap();
        assert!((average_fidelity(&lambda).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_round_trip_and_kraus() {
        let ad = amplitude_damping(0.3).unwrap();
        let back = Superoperator::from_choi(2, &ad.choi()).unwrap();
        assert!(ad.max_abs_diff(&back) < 1e-14);
        let via_kraus = ad.to_kraus().unwrap().to_superoperator();
        assert!(ad.max_abs_diff(&via_kraus) < 1e-10);
        let id = KrausSet::new(vec![CMatrix::identity(2, 2)]).unwrap();
        assert!(id.to_superoperator().max_abs_diff(&Superoperator::identity(2)) < 1e-15);
    }

    #[test]
    fn built_in_constructors_are_cptp() {
        assert!(amplitude_damping(0.1).unwrap().is_cptp());
        assert!(depolarizing(0.5, 4).unwrap().is_cptp());
        assert!(totally_depolarizing(2).unwrap().is_cptp());
        assert!(!Superoperator::zero(2).is_cptp());
    }

    #[test]
    fn ptm_of_depolarizing_is_diagonal() {
        let r = depolarizing(0.8, 2).unwrap().real_ptm().unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.8, 0.8, 0.8]));
        assert!((r - expected).norm() < 1e-12);
    }

    #[test]
    fn twirl_of_amplitude_damping_is_depolarizing() {
        let group = CliffordGroup::enumerate(1).unwrap();
        let ad = amplitude_damping(0.1).unwrap();
        let tw = twirl_exact(&ad, group.elements()).unwrap();
        let r = error_rate(&ad).unwrap();
        // r = (d − 1)(1 − p)/d at d = 2
        let p = 1.0 - 2.0 * r;
        assert!(tw.max_abs_diff(&depolarizing(p, 2).unwrap()) < 1e-10);
        assert!(matches!(
            twirl_exact(&ad, &group.elements()[..20]),
            Err(RbError::Contract(_))
        ));
    }

    #[test]
    fn depolarizing_channels_commute() {
        let a = depolarizing(0.9, 2).unwrap();
        let b = depolarizing(0.7, 2).unwrap();
        let ab = a.compose(&b).unwrap();
        assert!(ab.max_abs_diff(&b.compose(&a).unwrap()) < 1e-12);
        assert!(ab.max_abs_diff(&depolarizing(0.63, 2).unwrap()) < 1e-12);
    }
}
