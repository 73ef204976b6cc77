//! Channel distances: the Pauli-channel diamond distance with explicit SDP
//! certificates, the 1→1 Hermitian norm, and fidelity-based bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{
    average_fidelity, hermitian_eigen, hermitian_eigenvalues, pauli_matrix, CMatrix, PauliChannel, Superoperator, PROBABILITY_TOL,
    STRUCTURAL_TOL,
};
use crate::error::{RbError, Result};

/// Difference `v = q − r` of two Pauli probability vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliDiff {
    n: usize,
    v: Vec<f64>,
}

impl PauliDiff {
    pub fn new(q: &PauliChannel, r: &PauliChannel) -> Result<Self> {
        if q.num_qubits() != r.num_qubits() {
            return Err(RbError::Shape(format!(
                "Pauli channels on {} and {} qubits",
                q.num_qubits(),
                r.num_qubits()
            )));
        }
        let v: Vec<f64> = q.probs().iter().zip(r.probs()).map(|(a, b)| a - b).collect();
        debug_assert!(v.iter().sum::<f64>().abs() < 1e3 * PROBABILITY_TOL);
        Ok(PauliDiff {
            n: q.num_qubits(),
            v,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn l1(&self) -> f64 {
        self.v.iter().map(|x| x.abs()).sum()
    }

    /// The map `Φ(ρ) = Σ_k v_k P_k ρ P_k`.
    pub fn to_superoperator(&self) -> Superoperator {
        let d = 1usize << self.n;
        let mut mat = CMatrix::zeros(d * d, d * d);
        for (k, &vk) in self.v.iter().enumerate() {
            if vk != 0.0 {
                let p = pauli_matrix(self.n, k);
                mat += p.conjugate().kronecker(&p) * Complex64::new(vk, 0.0);
            }
        }
        Superoperator::from_matrix(d, mat).expect("shape follows from n")
    }
}

/// Values of the explicit primal and dual feasible points for the diamond
/// norm SDP of a Pauli-channel difference.
/// The SDP optimum is `½‖Δ‖◇`, so tight certificates equal half the distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificatePair {
    /// `⟨J, W⟩` with `W = Π₊/d`, `ρ = 𝟙/d`.
    pub primal: f64,
    /// `‖tr_out Z‖_∞` with `Z = Π₊ J Π₊`.
    pub dual: f64,
    /// `0 ≤ W ≤ ρ ⊗ 𝟙` verified numerically.
    pub primal_feasible: bool,
    /// `Z ≥ J` and `Z ≥ 0` verified numerically.
    pub dual_feasible: bool,
}

impl CertificatePair {
    /// Both points feasible and their values agree within `tol`.
    pub fn is_tight(&self, tol: f64) -> bool {
        self.primal_feasible && self.dual_feasible && (self.primal - self.dual).abs() <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiamondDistance {
    /// `‖E₁ − E₂‖◇ = ‖q − r‖₁`.
    pub distance: f64,
    pub certificates: CertificatePair,
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).min()
}

/// Diamond distance between two Pauli channels, with certificates built from
/// the dense Choi matrix of their difference.
pub fn pauli_diamond_distance(q: &PauliChannel, r: &PauliChannel) -> Result<DiamondDistance> {
    let diff = PauliDiff::new(q, r)?;
    let d = q.dim();
    let j = hermitian_part(&diff.to_superoperator().choi());
    let eig = hermitian_eigen(&j);
    let mut pi_plus = CMatrix::zeros(d * d, d * d);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda >= 0.0 {
            let v = eig.eigenvectors.column(k);
            pi_plus += v * v.adjoint();
        }
    }
    let dc = Complex64::new(d as f64, 0.0);

    let w = &pi_plus / dc;
    let primal = (&j * &w).trace().re;
    let rho_times_id = CMatrix::identity(d * d, d * d) / dc;
    let primal_feasible =
        min_eigenvalue(&w) >= -STRUCTURAL_TOL && min_eigenvalue(&(rho_times_id - &w)) >= -STRUCTURAL_TOL;

    let z = &pi_plus * &j * &pi_plus;
    let tr_out = CMatrix::from_fn(d, d, |a, b| (0..d).map(|k| z[(a * d + k, b * d + k)]).sum());
    let dual = hermitian_eigenvalues(&tr_out)
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let dual_feasible =
        min_eigenvalue(&z) >= -STRUCTURAL_TOL && min_eigenvalue(&(&z - &j)) >= -STRUCTURAL_TOL;

    Ok(DiamondDistance {
        distance: diff.l1(),
        certificates: CertificatePair {
            primal,
            dual,
            primal_feasible,
            dual_feasible,
        },
    })
}

/// `‖Λ − I‖◇ = 2(d+1)r/d`, valid when `Λ` is a generalized Pauli channel.
pub fn diamond_from_r(r: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(RbError::Domain(format!("error rate {r} outside [0, 1]")));
    }
    Ok(2.0 * (d as f64 + 1.0) * r / d as f64)
}

/// `|F̄(E₁) − F̄(E₂)|` with fidelities taken against the identity.
pub fn delta_f(e1: &Superoperator, e2: &Superoperator) -> Result<f64> {
    Ok((average_fidelity(e1)? - average_fidelity(e2)?).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinFidelityBound {
    /// `1 − ‖E₁ − E₂‖◇`, not clamped.
    pub value: f64,
    /// Set when the bound is negative and therefore vacuous.
    pub negative: bool,
}

/// Lower bound on the minimum gate fidelity between two Pauli channels.
pub fn min_fidelity_bound(q: &PauliChannel, r: &PauliChannel) -> Result<MinFidelityBound> {
    let value = 1.0 - PauliDiff::new(q, r)?.l1();
    Ok(MinFidelityBound {
        value,
        negative: value < 0.0,
    })
}

/// Settings for the 1→1 Hermitian norm search.
#[derive(Clone, Debug)]
pub struct OneOneOptions {
    pub restarts: usize,
    /// Stop a restart once an ascent step gains less than this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Bloch-sphere grid spacing in degrees for `d = 2`; `None` disables it.
    pub grid_step_degrees: Option<f64>,
}

impl Default for OneOneOptions {
    fn default() -> Self {
        OneOneOptions {
            restarts: 64,
            tolerance: 1e-6,
            max_iterations: 10_000,
            seed: 0x5eed,
            grid_step_degrees: Some(0.5),
        }
    }
}

/// `max_{A = A†, ‖A‖₁ ≤ 1} ‖Δ(A)‖₁` with default options.
pub fn one_one_h_norm(delta: &Superoperator) -> Result<f64> {
    one_one_h_norm_with(delta, &OneOneOptions::default())
}

/// Extreme points of the Hermitian trace ball are `±|ψ⟩⟨ψ|`, so the norm is a
/// maximum over pure states. Each restart runs a monotone ascent: with
/// `S = sign(Δ(ψψ†))`, the next `ψ` is the top eigenvector of `Δ*(S)`, which
/// cannot decrease `‖Δ(ψψ†)‖₁`. For `d = 2` a Bloch-sphere grid is evaluated
/// as well and the larger value is returned.
pub fn one_one_h_norm_with(delta: &Superoperator, opts: &OneOneOptions) -> Result<f64> {
    let ptm = delta
        .real_ptm()
        .map_err(|_| RbError::Contract("1→1 Hermitian norm needs a Hermiticity-preserving map".into()))?;
    let d = delta.dim();
    let adjoint = delta.adjoint();

    let ascent = |start: DVector<Complex64>| -> f64 {
        let mut psi = start;
        let mut value = f64::NEG_INFINITY;
        for _ in 0..opts.max_iterations {
            let rho = &psi * psi.adjoint();
            let out = hermitian_part(&delta.apply_operator(&rho).expect("dimension checked"));
            let eig = hermitian_eigen(&out);
            let current: f64 = eig.eigenvalues.iter().map(|x| x.abs()).sum();
            if current - value < opts.tolerance {
                value = value.max(current);
                break;
            }
            value = current;
            let signs = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| {
                Complex64::new(if x >= 0.0 { 1.0 } else { -1.0 }, 0.0)
            }));
            let s = &eig.eigenvectors * signs * eig.eigenvectors.adjoint();
            let g = hermitian_part(&adjoint.apply_operator(&s).expect("dimension checked"));
            let ge = hermitian_eigen(&g);
            let top = ge.eigenvalues.imax();
            psi = ge.eigenvectors.column(top).into_owned();
        }
        value
    };

    let best_local = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let v = DVector::from_vec(v);
            let norm = v.norm();
            ascent(v / Complex64::new(norm, 0.0))
        })
        .reduce(|| 0.0, f64::max);

    let grid = match (d, opts.grid_step_degrees) {
        (2, Some(step)) => bloch_grid_max(&ptm, step),
        _ => 0.0,
    };
    Ok(best_local.max(grid))
}

/// `max ‖Δ(ρ)‖₁` over pure qubit states on a `(θ, φ)` grid. With
/// `ρ = (𝟙 + r·σ)/2` and `t = R (1, r)`, `Δ(ρ) = (t₀𝟙 + t·σ)/2`, whose trace
/// norm is `max(|t₀|, |t|)`.
fn bloch_grid_max(ptm: &DMatrix<f64>, step_degrees: f64) -> f64 {
    let n_theta = (180.0 / step_degrees).ceil() as usize;
    let n_phi = (360.0 / step_degrees).ceil() as usize;
    let mut best = 0.0f64;
    for a in 0..=n_theta {
        let theta = std::f64::consts::PI * a as f64 / n_theta as f64;
        for b in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * b as f64 / n_phi as f64;
            let s = [
                1.0,
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let t: Vec<f64> = (0..4)
                .map(|i| (0..4).map(|j| ptm[(i, j)] * s[j]).sum())
                .collect();
            let vec_norm = (t[1] * t[1] + t[2] * t[2] + t[3] * t[3]).sqrt();
            best = best.max(t[0].abs().max(vec_norm));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, totally_depolarizing, unitary_channel};
    use crate::clifford::Pulse;

    #[test]
    fn diamond_examples() {
        let id = PauliChannel::identity(1);
        assert_eq!(pauli_diamond_distance(&id, &id).unwrap().distance, 0.0);

        let q = PauliChannel::new(1, vec![0.97, 0.01, 0.01, 0.01]).unwrap();
        let res = pauli_diamond_distance(&q, &id).unwrap();
        assert!((res.distance - 0.06).abs() < 1e-12);
        assert!(res.certificates.is_tight(1e-10));
        assert!((res.certificates.primal - 0.03).abs() < 1e-10);

        let d1 = PauliChannel::depolarizing(1, 1.0).unwrap();
        let d2 = PauliChannel::depolarizing(1, 0.9).unwrap();
        assert!((pauli_diamond_distance(&d1, &d2).unwrap().distance - 0.15).abs() < 1e-12);
    }

    #[test]
    fn diamond_from_r_examples() {
        assert_eq!(diamond_from_r(0.0, 2).unwrap(), 0.0);
        assert!((diamond_from_r(0.05, 2).unwrap() - 0.15).abs() < 1e-15);
        assert!(diamond_from_r(1.5, 2).is_err());
    }

    #[test]
    fn fidelity_bound_examples() {
        let dep = PauliChannel::depolarizing(1, 0.98).unwrap();
        let id = PauliChannel::identity(1);
        let b = min_fidelity_bound(&dep, &id).unwrap();
        assert!((b.value - 0.97).abs() < 1e-12);
        assert!(!b.negative);
        let df = delta_f(&dep.to_superoperator(), &id.to_superoperator()).unwrap();
        assert!((df - 0.01).abs() < 1e-12);

        let x = PauliChannel::new(1, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let z = PauliChannel::new(1, vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(min_fidelity_bound(&x, &z).unwrap().negative);
    }

    #[test]
    fn one_one_norm_basic_values() {
        assert_eq!(one_one_h_norm(&Superoperator::zero(2)).unwrap(), 0.0);
        let c = unitary_channel(&Pulse::X90.unitary()).unwrap();
        let delta = c.adjoint().sub(&totally_depolarizing(2).unwrap()).unwrap();
        assert!((one_one_h_norm(&delta).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn one_one_norm_rejects_non_hermitian_maps() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(0.0, 1.0);
        let s = Superoperator::from_matrix(2, m).unwrap();
        assert!(matches!(one_one_h_norm(&s), Err(RbError::Contract(_))));
    }

    #[test]
    fn one_one_below_diamond_for_depolarizing_pair() {
        let a = depolarizing(0.9, 2).unwrap();
        let b = depolarizing(0.7, 2).unwrap();
        let norm = one_one_h_norm(&a.sub(&b).unwrap()).unwrap();
        let diamond = pauli_diamond_distance(
            &PauliChannel::depolarizing(1, 0.9).unwrap(),
            &PauliChannel::depolarizing(1, 0.7).unwrap(),
        )
        .unwrap()
        .distance;
        assert!(norm <= diamond + 1e-12);
        // ‖(p₁ − p₂)(ρ − 𝟙/d)‖₁ is maximal on pure states: |p₁ − p₂|·2(d − 1)/d.
        assert!((norm - 0.2).abs() < 1e-6);
    }

    #[test]
    fn grid_and_ascent_agree_on_a_qubit() {
        let c = unitary_channel(&Pulse::Y90.unitary()).unwrap();
        let delta = c.sub(&depolarizing(0.8, 2).unwrap()).unwrap();
        let no_grid = OneOneOptions {
            grid_step_degrees: None,
            ..Default::default()
        };
        let local = one_one_h_norm_with(&delta, &no_grid).unwrap();
        let grid = bloch_grid_max(&delta.real_ptm().unwrap(), 0.5);
        assert!((local - grid).abs() < 1e-4, "{local} vs {grid}");
    }
}
