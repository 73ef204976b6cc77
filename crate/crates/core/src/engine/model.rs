use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::noise::NoiseModel;
use super::pauli_state::pauli_coords;
use super::spam::SpamSpec;
use crate::channels::Superoperator;
use crate::clifford::{to_superoperator, CliffordGroup};
use crate::error::{RbError, Result};
use crate::metrics::one_one_h_norm;

/// Coefficients of the fidelity curves `F0(m) = A0 p^m + B0` and
/// `F1(m) = A1 p^m + B1 + C1 (m−1)(q − p²) p^{m−2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelCoefficients {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub a0: f64,
    pub b0: f64,
    /// Undefined when `p = 0`.
    pub a1: Option<f64>,
    pub b1: f64,
    pub c1: f64,
    /// `Tr[E R(ρ − 𝟙/d)]`.
    pub g: f64,
    /// `Tr[E Λ(Q(ρ) − 𝟙/d)]`.
    pub a11: f64,
    /// `Tr[E Λ(ρ)]`.
    pub lambda_rho: f64,
    /// `Tr E`.
    pub effect_trace: f64,
}

impl ModelCoefficients {
    pub fn zeroth_order(&self, m: usize) -> f64 {
        self.a0 * self.p.powi(m as i32) + self.b0
    }

    pub fn first_order(&self, m: usize) -> f64 {
        let q_sum = (m as f64 - 1.0) * self.gate_dependence();
        first_order_value(m, self.p, self.g + self.a11, self.a0, q_sum, self.b1)
    }

    /// `q − p²`, zero for gate-independent noise.
    pub fn gate_dependence(&self) -> f64 {
        self.q - self.p * self.p
    }
}

/// `p^{m−1}(G + A11 − A0 p) + A0 p^{m−2} Σ_j (q_j − p²) + H`.
fn first_order_value(m: usize, p: f64, g_plus_a11: f64, a0: f64, q_sum: f64, h: f64) -> f64 {
    let lead = p.powi(m as i32 - 1) * (g_plus_a11 - a0 * p);
    let drift = if m >= 2 {
        a0 * p.powi(m as i32 - 2) * q_sum
    } else {
        0.0
    };
    lead + drift + h
}

/// Real PTMs of the enumerated group's Cliffords.
fn clifford_ptms(group: &CliffordGroup) -> Result<Vec<DMatrix<f64>>> {
    group
        .elements()
        .par_iter()
        .map(|g| to_superoperator(g)?.real_ptm())
        .collect()
}

fn depol_param(r: &DMatrix<f64>) -> f64 {
    let d2 = r.nrows() as f64;
    (r.trace() - 1.0) / (d2 - 1.0)
}

fn enumerable(noise: &NoiseModel) -> Result<CliffordGroup> {
    CliffordGroup::enumerate(noise.num_qubits()).map_err(|_| {
        RbError::Capacity(format!(
            "group averages need an enumerable group; n={} is too large",
            noise.num_qubits()
        ))
    })
}

/// Group-average data shared by the first-order model and the bounds.
struct Averager<'a> {
    noise: &'a NoiseModel,
    group: CliffordGroup,
    ptms: Vec<DMatrix<f64>>,
}

impl<'a> Averager<'a> {
    fn new(noise: &'a NoiseModel) -> Result<Self> {
        let group = enumerable(noise)?;
        let ptms = clifford_ptms(&group)?;
        Ok(Averager { noise, group, ptms })
    }

    fn size(&self) -> f64 {
        self.group.len() as f64
    }

    fn lambda_ptm(&self, i: usize, step: usize) -> Result<DMatrix<f64>> {
        self.noise.channel_at(&self.group, i, step)?.real_ptm()
    }

    /// Steps averaged into the reference map `Λ`.
    fn steps(&self) -> Vec<usize> {
        (1..=self.noise.horizon().unwrap_or(1)).collect()
    }

    /// `Λ = avg_{i,j} Λ_{i,j}` as a superoperator.
    fn lambda_super(&self) -> Result<Superoperator> {
        let d = self.noise.dim();
        let steps = self.steps();
        let mut acc = Superoperator::zero(d);
        for &j in &steps {
            for i in 0..self.group.len() {
                acc = acc.add(&*self.noise.channel_at(&self.group, i, j)?)?;
            }
        }
        Ok(acc.scale(1.0 / (self.size() * steps.len() as f64)))
    }

    fn lambda(&self) -> Result<DMatrix<f64>> {
        let steps = self.steps();
        let dim = self.ptms[0].nrows();
        let mut acc = DMatrix::zeros(dim, dim);
        for &j in &steps {
            for i in 0..self.group.len() {
                acc += self.lambda_ptm(i, j)?;
            }
        }
        Ok(acc / (self.size() * steps.len() as f64))
    }

    /// `Q_j = avg_i C_i† Λ_{i,j} C_i`.
    fn q_map(&self, step: usize) -> Result<DMatrix<f64>> {
        let dim = self.ptms[0].nrows();
        let mut acc = DMatrix::zeros(dim, dim);
        for (i, c) in self.ptms.iter().enumerate() {
            acc += c.transpose() * self.lambda_ptm(i, step)? * c;
        }
        Ok(acc / self.size())
    }

    /// `R_j = avg_i Λ_{i,j} C_i Λ C_i†`.
    fn r_map(&self, step: usize, lambda: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let dim = self.ptms[0].nrows();
        let mut acc = DMatrix::zeros(dim, dim);
        for (i, c) in self.ptms.iter().enumerate() {
            acc += self.lambda_ptm(i, step)? * c * lambda * c.transpose();
        }
        Ok(acc / self.size())
    }
}

/// Pauli coordinates of `ρ`, `E` and `𝟙/d`.
struct Coords {
    rho: DVector<f64>,
    effect: DVector<f64>,
    mixed: DVector<f64>,
    d: f64,
}

impl Coords {
    fn new(noise: &NoiseModel, spam: &SpamSpec) -> Result<Self> {
        if spam.dim() != noise.dim() {
            return Err(RbError::Shape("SPAM and noise dimensions differ".into()));
        }
        let n = noise.num_qubits();
        let mut mixed = DVector::zeros(1 << (2 * n));
        mixed[0] = 1.0;
        Ok(Coords {
            rho: pauli_coords(n, spam.rho().matrix()),
            effect: pauli_coords(n, spam.effect()),
            mixed,
            d: noise.dim() as f64,
        })
    }

    /// `Tr[E X]` from the coordinates of `X`.
    fn measure(&self, x: &DVector<f64>) -> f64 {
        self.effect.dot(x) / self.d
    }
}

/// Zeroth- and first-order coefficients for time-independent noise.
pub fn model_coefficients(noise: &NoiseModel, spam: &SpamSpec) -> Result<ModelCoefficients> {
    if noise.is_time_dependent() {
        return Err(RbError::UnsupportedMode(
            "time-dependent noise has no fixed coefficients; use first_order_prediction".into(),
        ));
    }
    let c = Coords::new(noise, spam)?;
    let av = Averager::new(noise)?;
    let lambda = av.lambda()?;
    let p = depol_param(&lambda);
    let q_map = av.q_map(1)?;
    let q = depol_param(&(&q_map * &lambda));
    let r_map = av.r_map(1, &lambda)?;
    let centered = &c.rho - &c.mixed;
    let a0 = c.measure(&(&lambda * &centered));
    let b0 = c.measure(&(&lambda * &c.mixed));
    let g = c.measure(&(&r_map * &centered));
    let h = c.measure(&(&r_map * &c.mixed));
    let a11 = c.measure(&(&lambda * (&q_map * &c.rho - &c.mixed)));
    let a1 = (p != 0.0).then(|| (g + a11) / p - a0);
    Ok(ModelCoefficients {
        d: noise.dim(),
        p,
        q,
        a0,
        b0,
        a1,
        b1: h,
        c1: a0,
        g,
        a11,
        lambda_rho: a0 + b0,
        effect_trace: spam.effect_trace(),
    })
}

/// First-order prediction `F1(m)`; for time-dependent noise the step averages
/// `Q_1`, `q_2 … q_m` and `R_{m+1}` enter separately.
pub fn first_order_prediction(m: usize, noise: &NoiseModel, spam: &SpamSpec) -> Result<f64> {
    if m < 1 {
        return Err(RbError::Contract("sequence length must be >= 1".into()));
    }
    if !noise.is_time_dependent() {
        return Ok(model_coefficients(noise, spam)?.first_order(m));
    }
    noise.check_length(m)?;
    let c = Coords::new(noise, spam)?;
    let av = Averager::new(noise)?;
    let lambda = av.lambda()?;
    let p = depol_param(&lambda);
    let centered = &c.rho - &c.mixed;
    let a0 = c.measure(&(&lambda * &centered));
    let r_map = av.r_map(m + 1, &lambda)?;
    let g = c.measure(&(&r_map * &centered));
    let h = c.measure(&(&r_map * &c.mixed));
    let a11 = c.measure(&(&lambda * (av.q_map(1)? * &c.rho - &c.mixed)));
    let mut q_sum = 0.0;
    for j in 2..=m {
        q_sum += depol_param(&(av.q_map(j)? * &lambda)) - p * p;
    }
    Ok(first_order_value(m, p, g + a11, a0, q_sum, h))
}

/// Grand-average error map `Λ = avg_{i,j} Λ_{i,j}` (all steps of a
/// time-dependent model).
pub fn average_error_operator(noise: &NoiseModel) -> Result<Superoperator> {
    Averager::new(noise)?.lambda_super()
}

/// `avg_i Λ_{i,step}`.
pub fn step_average_error_operator(noise: &NoiseModel, step: usize) -> Result<Superoperator> {
    let av = Averager::new(noise)?;
    let mut acc = Superoperator::zero(noise.dim());
    for i in 0..av.group.len() {
        acc = acc.add(&*noise.channel_at(&av.group, i, step)?)?;
    }
    Ok(acc.scale(1.0 / av.size()))
}

/// `γ_j = avg_i ‖Λ_{i,j} − Λ‖_{1→1H}`: one value for time-independent noise,
/// one per step otherwise.
pub fn gamma(noise: &NoiseModel) -> Result<Vec<f64>> {
    if !noise.is_time_dependent() && noise.is_gate_independent() {
        return Ok(vec![0.0]);
    }
    let av = Averager::new(noise)?;
    let lambda = av.lambda_super()?;
    av.steps()
        .into_iter()
        .map(|j| {
            let norms = (0..av.group.len())
                .into_par_iter()
                .map(|i| one_one_h_norm(&noise.channel_at(&av.group, i, j)?.sub(&lambda)?))
                .collect::<Result<Vec<f64>>>()?;
            Ok(norms.iter().sum::<f64>() / av.size())
        })
        .collect()
}

/// Bound on the order-`k` term of the perturbative expansion at length `m`.
///
/// With a single `γ` this is `C(m+1, k) γ^k`; with per-step values it is the
/// elementary symmetric polynomial of order `k` in `γ_1 … γ_{m+1}`.
pub fn perturbation_bound(k: usize, gammas: &[f64], m: usize) -> Result<f64> {
    if gammas.is_empty() {
        return Err(RbError::Contract("no gamma values".into()));
    }
    if gammas.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return Err(RbError::Domain("gamma values must be finite and non-negative".into()));
    }
    if gammas.len() == 1 {
        return Ok(binomial(m + 1, k) * gammas[0].powi(k as i32));
    }
    if gammas.len() < m + 1 {
        return Err(RbError::Contract(format!(
            "{} gamma values cover fewer than the {} steps of length {m}",
            gammas.len(),
            m + 1
        )));
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &g in &gammas[..m + 1] {
        for j in (1..=k).rev() {
            e[j] += g * e[j - 1];
        }
    }
    Ok(e[k])
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
