//! Least-squares fits of the zeroth- and first-order decay models.
//!
//! The first-order correction `C1 (m−1)(q − p²) p^{m−2}` is fit with a single
//! coefficient `D = C1 (q − p²)`: the curve only constrains the product, so
//! `C1` and `q` cannot be recovered separately from data.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::engine::{CurvePoint, ModelCoefficients, RbDataset, SpamSpec};
use crate::error::{RbError, Result};

/// Sample variance of the per-length means below which a curve is flat.
pub const FLAT_VARIANCE: f64 = 1e-10;
/// Tolerance for the flat-curve classification conditions.
pub const FLAT_TOL: f64 = 1e-9;
/// Default significance threshold, in combined standard errors.
pub const DEFAULT_SIGMA_THRESHOLD: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Zeroth,
    First,
}

impl ModelKind {
    fn num_params(self) -> usize {
        match self {
            ModelKind::Zeroth => 3,
            ModelKind::First => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence threshold on parameter steps, relative to `1 + |θ|`.
    pub tolerance: f64,
    /// Attach a warning that the time-independent model is being applied to
    /// time-dependent noise.
    pub time_dependent_noise: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 500,
            tolerance: 1e-10,
            time_dependent_noise: false,
        }
    }
}

/// `y(m) = A p^m + B [+ D (m−1) p^{m−2}]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitParams {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

impl FitParams {
    pub fn predict(&self, m: usize) -> f64 {
        let theta = self.to_vec();
        model_value(&theta, m as f64)
    }

    fn to_vec(self) -> Vec<f64> {
        let mut v = vec![self.p, self.a, self.b];
        if let Some(d) = self.d {
            v.push(d);
        }
        v
    }

    fn from_vec(v: &[f64]) -> Self {
        FitParams {
            p: v[0],
            a: v[1],
            b: v[2],
            d: v.get(3).copied(),
        }
    }
}

/// Standard errors from `σ̂² (JᵀWJ)⁻¹` with `σ̂² = RSS_w / (N − P)`; absent
/// when there are no residual degrees of freedom or `JᵀWJ` is singular.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitErrors {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub model: ModelKind,
    pub dim: usize,
    /// `None` for flat curves, where `p` is not identifiable.
    pub params: Option<FitParams>,
    pub std_errors: Option<FitErrors>,
    /// `r = (d − 1)(1 − p)/d`.
    pub r: Option<f64>,
    pub residual_sum: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub boundary_hit: bool,
    pub flat_curve: bool,
    pub warnings: Vec<String>,
    pub observed: Vec<CurvePoint>,
    /// Plot-ready `(m, y)` samples of the fitted curve.
    pub predicted: Vec<(f64, f64)>,
}

fn pow(p: f64, e: i64) -> f64 {
    if e < 0 && p == 0.0 {
        0.0
    } else {
        p.powi(e as i32)
    }
}

fn model_value(theta: &[f64], m: f64) -> f64 {
    let (p, a, b) = (theta[0], theta[1], theta[2]);
    let mi = m as i64;
    let mut y = a * pow(p, mi) + b;
    if let Some(&d) = theta.get(3) {
        if mi >= 2 {
            y += d * (m - 1.0) * pow(p, mi - 2);
        }
    }
    y
}

/// Row of the Jacobian with respect to `(p, A, B[, D])`.
fn jacobian_row(theta: &[f64], m: f64) -> Vec<f64> {
    let (p, a) = (theta[0], theta[1]);
    let mi = m as i64;
    let mut dp = a * m * pow(p, mi - 1);
    let mut row = vec![0.0, pow(p, mi), 1.0];
    if let Some(&d) = theta.get(3) {
        if mi >= 3 {
            dp += d * (m - 1.0) * (m - 2.0) * pow(p, mi - 3);
        }
        row.push(if mi >= 2 { (m - 1.0) * pow(p, mi - 2) } else { 0.0 });
    }
    row[0] = dp;
    row
}

struct Problem {
    m: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Problem {
    fn cost(&self, theta: &[f64]) -> f64 {
        self.m
            .iter()
            .zip(&self.y)
            .zip(&self.w)
            .map(|((&m, &y), &w)| w * (y - model_value(theta, m)).powi(2))
            .sum()
    }

    /// `(JᵀWJ, JᵀW r)`.
    fn normal_equations(&self, theta: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        let k = theta.len();
        let mut h = DMatrix::zeros(k, k);
        let mut g = DVector::zeros(k);
        for ((&m, &y), &w) in self.m.iter().zip(&self.y).zip(&self.w) {
            let row = DVector::from_vec(jacobian_row(theta, m));
            let r = y - model_value(theta, m);
            h += &row * row.transpose() * w;
            g += &row * (w * r);
        }
        (h, g)
    }

    /// For fixed `p` the model is linear in the remaining parameters; solve
    /// that weighted least-squares problem by SVD.
    fn solve_linear(&self, p: f64, k: usize) -> Option<(Vec<f64>, f64)> {
        let mut probe = vec![p, 0.0, 0.0];
        if k == 4 {
            probe.push(0.0);
        }
        let rows = self.m.len();
        let mut x = DMatrix::zeros(rows, k - 1);
        let mut y = DVector::zeros(rows);
        for (i, ((&m, &yi), &w)) in self.m.iter().zip(&self.y).zip(&self.w).enumerate() {
            let sw = w.sqrt();
            for (j, v) in jacobian_row(&probe, m)[1..].iter().enumerate() {
                x[(i, j)] = sw * v;
            }
            y[i] = sw * yi;
        }
        let svd = x.svd(true, true);
        let smax = svd.singular_values.max();
        if smax <= 0.0 || svd.singular_values.min() <= 1e-12 * smax {
            return None;
        }
        let sol = svd.solve(&y, 0.0).ok()?;
        let mut theta = vec![p];
        theta.extend(sol.iter());
        project(&mut theta);
        let cost = self.cost(&theta);
        cost.is_finite().then_some((theta, cost))
    }

    fn profile(&self, p: f64, k: usize) -> f64 {
        self.solve_linear(p, k).map_or(f64::INFINITY, |(_, c)| c)
    }
}

struct Refined {
    theta: Vec<f64>,
    cost: f64,
    iterations: usize,
    converged: bool,
}

/// Box on `(p, A, B, D)`. `A` and `B` are differences and traces of
/// probabilities; the box keeps near-linear data from pushing the fit into
/// the unbounded `p → 1`, `A → ∞`, `B → −∞` direction.
const LOWER: [f64; 4] = [0.0, -1.0, 0.0, -2.0];
const UPPER: [f64; 4] = [1.0, 1.0, 1.0, 2.0];

fn project(theta: &mut [f64]) {
    for (i, t) in theta.iter_mut().enumerate() {
        *t = t.clamp(LOWER[i], UPPER[i]);
    }
}

fn at_any_bound(theta: &[f64]) -> bool {
    theta
        .iter()
        .enumerate()
        .any(|(i, &t)| t <= LOWER[i] || t >= UPPER[i])
}

/// Parameters pinned at a bound with the descent direction `g` pointing out.
fn active_set(theta: &[f64], g: &DVector<f64>) -> Vec<bool> {
    theta
        .iter()
        .enumerate()
        .map(|(i, &t)| (t >= UPPER[i] && g[i] > 0.0) || (t <= LOWER[i] && g[i] < 0.0))
        .collect()
}

/// Solve `h s = g` over the free parameters, leaving active ones fixed.
fn reduced_solve(h: &DMatrix<f64>, g: &DVector<f64>, active: &[bool]) -> Option<DVector<f64>> {
    let free: Vec<usize> = (0..g.len()).filter(|&i| !active[i]).collect();
    let mut step = DVector::zeros(g.len());
    if free.is_empty() {
        return Some(step);
    }
    let hr = DMatrix::from_fn(free.len(), free.len(), |a, b| h[(free[a], free[b])]);
    let gr = DVector::from_fn(free.len(), |a, _| g[free[a]]);
    let sol = hr.cholesky()?.solve(&gr);
    for (a, &i) in free.iter().enumerate() {
        step[i] = sol[a];
    }
    Some(step)
}

/// Damped Gauss-Newton with box projection.
fn refine(problem: &Problem, start: Vec<f64>, opts: &FitOptions) -> Refined {
    let mut theta = start;
    project(&mut theta);
    let mut cost = problem.cost(&theta);
    let mut lambda = 1e-3;
    let small = |step: &DVector<f64>, theta: &[f64]| {
        step.iter()
            .zip(theta)
            .all(|(s, t)| s.abs() <= opts.tolerance * (1.0 + t.abs()))
    };
    for it in 1..=opts.max_iterations {
        let (h, g) = problem.normal_equations(&theta);
        let active = active_set(&theta, &g);
        // Converged once the undamped Gauss-Newton step is negligible.
        if let Some(full) = reduced_solve(&h, &g, &active) {
            if small(&full, &theta) {
                return Refined {
                    theta,
                    cost,
                    iterations: it,
                    converged: true,
                };
            }
        }
        let scale = h.diagonal().max().max(1e-300);
        let mut damped = h.clone();
        for i in 0..theta.len() {
            damped[(i, i)] += lambda * (h[(i, i)] + 1e-12 * scale);
        }
        let Some(step) = reduced_solve(&damped, &g, &active) else {
            lambda *= 10.0;
            continue;
        };
        let mut next: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
        project(&mut next);
        let next_cost = problem.cost(&next);
        if next_cost.is_finite() && next_cost < cost {
            let moved = DVector::from_iterator(next.len(), next.iter().zip(&theta).map(|(a, b)| a - b));
            let done = small(&moved, &theta) && lambda <= 1e-6;
            theta = next;
            cost = next_cost;
            lambda = (lambda / 10.0).max(1e-15);
            if done {
                return Refined {
                    theta,
                    cost,
                    iterations: it,
                    converged: true,
                };
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e15 {
                // No descent direction left at working precision.
                return Refined {
                    theta,
                    cost,
                    iterations: it,
                    converged: true,
                };
            }
        }
    }
    Refined {
        theta,
        cost,
        iterations: opts.max_iterations,
        converged: false,
    }
}

/// Log-linear initializer: `B̂ = min(tail mean, 1/d)`, then a weighted line
/// through `ln|F̄(m) − B̂|`.
fn log_linear_start(problem: &Problem, dim: usize) -> Option<Vec<f64>> {
    let n = problem.y.len();
    let tail_len = (n / 3).max(1);
    let tail = problem.y[n - tail_len..].iter().sum::<f64>() / tail_len as f64;
    let b = tail.min(1.0 / dim as f64);
    let sign = if problem.y[0] >= b { 1.0 } else { -1.0 };
    let pts: Vec<(f64, f64, f64)> = problem
        .m
        .iter()
        .zip(&problem.y)
        .zip(&problem.w)
        .filter_map(|((&m, &y), &w)| {
            let v = sign * (y - b);
            (v > 1e-12).then(|| (m, v.ln(), w))
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let sw: f64 = pts.iter().map(|t| t.2).sum();
    let mx = pts.iter().map(|t| t.2 * t.0).sum::<f64>() / sw;
    let my = pts.iter().map(|t| t.2 * t.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|t| t.2 * (t.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = pts.iter().map(|t| t.2 * (t.0 - mx) * (t.1 - my)).sum::<f64>() / sxx;
    let p = slope.exp().clamp(1e-6, 1.0);
    let a = sign * (my - slope * mx).exp();
    Some(vec![p, a, b])
}

/// Variable projection: minimize the profile cost over `p` alone, on a grid
/// dense near 1 followed by golden-section refinement of the best cell.
fn profile_start(problem: &Problem, k: usize) -> Option<Vec<f64>> {
    const N: usize = 2000;
    let grid: Vec<f64> = (0..=N).map(|i| 1.0 - (i as f64 / N as f64).powi(3)).collect();
    let costs: Vec<f64> = grid.iter().map(|&p| problem.profile(p, k)).collect();
    let best = (0..=N)
        .filter(|&i| costs[i].is_finite())
        .min_by(|&a, &b| costs[a].total_cmp(&costs[b]))?;
    let (mut lo, mut hi) = (grid[(best + 1).min(N)], grid[best.saturating_sub(1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (problem.profile(x1, k), problem.profile(x2, k));
    while hi - lo > 1e-14 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = problem.profile(x1, k);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = problem.profile(x2, k);
        }
    }
    let p = if f1 <= f2 { x1 } else { x2 };
    let candidate = problem.solve_linear(p, k);
    match candidate {
        Some((theta, c)) if c <= costs[best] => Some(theta),
        _ => problem.solve_linear(grid[best], k).map(|(t, _)| t),
    }
}

fn curve_samples(m_max: usize) -> Vec<f64> {
    if m_max <= 500 {
        return (1..=m_max).map(|m| m as f64).collect();
    }
    let mut ms: Vec<f64> = (0..200)
        .map(|i| (i as f64 / 199.0 * (m_max as f64).ln()).exp().round())
        .collect();
    ms.dedup();
    ms
}

fn fit(data: &RbDataset, model: ModelKind, opts: &FitOptions) -> Result<FitResult> {
    let observed = data.mean_curve();
    let k = model.num_params();
    if observed.len() < k {
        return Err(RbError::Contract(format!(
            "{model:?} fit needs at least {k} distinct lengths, got {}",
            observed.len()
        )));
    }
    let dim = data.dim();
    let mut warnings = Vec::new();
    if opts.time_dependent_noise {
        warnings.push(
            "time-dependent noise: the fitted coefficients are treated as length-independent"
                .to_string(),
        );
    }
    let means: Vec<f64> = observed.iter().map(|c| c.mean).collect();
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    let spread = means.iter().map(|y| (y - grand).powi(2)).sum::<f64>() / (means.len() - 1) as f64;
    let m_max = observed.last().map(|c| c.m).unwrap_or(1);
    if spread < FLAT_VARIANCE {
        warnings.push("flat curve: p is not identifiable".to_string());
        return Ok(FitResult {
            model,
            dim,
            params: None,
            std_errors: None,
            r: None,
            residual_sum: None,
            iterations: 0,
            converged: false,
            boundary_hit: false,
            flat_curve: true,
            warnings,
            predicted: curve_samples(m_max).into_iter().map(|m| (m, grand)).collect(),
            observed,
        });
    }
    let problem = Problem {
        m: observed.iter().map(|c| c.m as f64).collect(),
        y: means,
        w: observed.iter().map(|c| c.count as f64).collect(),
    };

    let mut starts = Vec::new();
    match model {
        ModelKind::Zeroth => starts.extend(log_linear_start(&problem, dim)),
        ModelKind::First => {
            let zeroth = fit(data, ModelKind::Zeroth, opts)?;
            if let Some(p) = zeroth.params {
                starts.push(vec![p.p, p.a, p.b, 0.0]);
            }
        }
    }
    starts.extend(profile_start(&problem, k));
    let best = starts
        .into_iter()
        .map(|s| refine(&problem, s, opts))
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .ok_or_else(|| RbError::Contract("no usable starting point for the fit".into()))?;

    let params = FitParams::from_vec(&best.theta);
    let dof = problem.m.len() as f64 - k as f64;
    let std_errors = if dof > 0.0 {
        let (h, _) = problem.normal_equations(&best.theta);
        h.try_inverse().and_then(|inv| {
            let s2 = best.cost / dof;
            let se: Vec<f64> = (0..k).map(|i| (s2 * inv[(i, i)]).max(0.0).sqrt()).collect();
            se.iter().all(|v| v.is_finite()).then(|| FitErrors {
                p: se[0],
                a: se[1],
                b: se[2],
                d: se.get(3).copied(),
            })
        })
    } else {
        warnings.push("no residual degrees of freedom: standard errors unavailable".to_string());
        None
    };
    let boundary_hit = at_any_bound(&best.theta);
    if boundary_hit {
        warnings.push(format!("parameters at the box boundary: {:?}", best.theta));
    }
    if !best.converged {
        warnings.push(format!("no convergence after {} iterations", best.iterations));
    }
    Ok(FitResult {
        model,
        dim,
        r: Some((dim as f64 - 1.0) * (1.0 - params.p) / dim as f64),
        residual_sum: Some(best.cost),
        std_errors,
        iterations: best.iterations,
        converged: best.converged,
        boundary_hit,
        flat_curve: false,
        warnings,
        predicted: curve_samples(m_max)
            .into_iter()
            .map(|m| (m, model_value(&best.theta, m)))
            .collect(),
        params: Some(params),
        observed,
    })
}

/// Fit `A p^m + B` to the per-length means.
pub fn fit_zeroth(data: &RbDataset) -> Result<FitResult> {
    fit(data, ModelKind::Zeroth, &FitOptions::default())
}

pub fn fit_zeroth_with(data: &RbDataset, opts: &FitOptions) -> Result<FitResult> {
    fit(data, ModelKind::Zeroth, opts)
}

/// Fit `A p^m + B + D (m−1) p^{m−2}`, starting from the zeroth-order fit.
pub fn fit_first(data: &RbDataset) -> Result<FitResult> {
    fit(data, ModelKind::First, &FitOptions::default())
}

pub fn fit_first_with(data: &RbDataset, opts: &FitOptions) -> Result<FitResult> {
    fit(data, ModelKind::First, opts)
}

/// Both fits and the gate-dependence diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelComparison {
    pub zeroth: FitResult,
    pub first: FitResult,
    pub p_zeroth: Option<f64>,
    pub p_first: Option<f64>,
    pub p_difference: Option<f64>,
    pub combined_std_error: Option<f64>,
    pub d_hat: Option<f64>,
    pub threshold_sigma: f64,
    pub flat_curve: bool,
    /// `None` when no decision is possible (flat curve or missing errors).
    pub gate_dependent: Option<bool>,
}

pub fn compare_models(data: &RbDataset) -> Result<ModelComparison> {
    compare_models_with(data, &FitOptions::default(), DEFAULT_SIGMA_THRESHOLD)
}

/// Flags gate dependence when `|p̂₀ − p̂₁| > threshold · sqrt(se₀² + se₁²)`.
pub fn compare_models_with(
    data: &RbDataset,
    opts: &FitOptions,
    threshold_sigma: f64,
) -> Result<ModelComparison> {
    let zeroth = fit_zeroth_with(data, opts)?;
    let first = fit_first_with(data, opts)?;
    let p0 = zeroth.params.map(|p| p.p);
    let p1 = first.params.map(|p| p.p);
    let diff = p0.zip(p1).map(|(a, b)| (a - b).abs());
    let combined = zeroth
        .std_errors
        .zip(first.std_errors)
        .map(|(a, b)| (a.p * a.p + b.p * b.p).sqrt());
    let flat = zeroth.flat_curve || first.flat_curve;
    let gate_dependent = if flat {
        None
    } else {
        diff.zip(combined).map(|(d, s)| d > threshold_sigma * s)
    };
    Ok(ModelComparison {
        p_zeroth: p0,
        p_first: p1,
        p_difference: diff,
        combined_std_error: combined,
        d_hat: first.params.and_then(|p| p.d),
        threshold_sigma,
        flat_curve: flat,
        gate_dependent,
        zeroth,
        first,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FlatKind {
    PZero,
    A0Zero,
    POne,
    NotFlat,
}

/// Degenerate-curve classification with the constant value of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatCurve {
    pub kind: FlatKind,
    pub value: Option<f64>,
}

/// Checks `p = 0`, then `A0 = 0` (`Tr[EΛ(ρ)] = Tr[EΛ(𝟙/d)]`), then `p = 1`,
/// where `Λ` is the identity and the curve sits at `Tr(ρE)`.
pub fn classify_flat_curve(coeffs: &ModelCoefficients, spam: &SpamSpec) -> FlatCurve {
    let lambda_mixed = coeffs.b0;
    if coeffs.p.abs() < FLAT_TOL {
        FlatCurve {
            kind: FlatKind::PZero,
            value: Some(lambda_mixed),
        }
    } else if (coeffs.lambda_rho - lambda_mixed).abs() < FLAT_TOL {
        FlatCurve {
            kind: FlatKind::A0Zero,
            value: Some(lambda_mixed),
        }
    } else if (coeffs.p - 1.0).abs() < FLAT_TOL {
        FlatCurve {
            kind: FlatKind::POne,
            value: Some(spam.measure(spam.rho().matrix())),
        }
    } else {
        FlatCurve {
            kind: FlatKind::NotFlat,
            value: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Record;

    fn synthetic(ms: &[usize], f: impl Fn(usize) -> f64) -> RbDataset {
        let records = ms
            .iter()
            .map(|&m| Record {
                m,
                seq: 0,
                survival: f(m),
                successes: None,
                shots: 0,
            })
            .collect();
        RbDataset::new(1, records).unwrap()
    }

    #[test]
    fn recovers_exact_zeroth_data() {
        let ms = [1, 2, 5, 10, 20, 50, 100];
        let data = synthetic(&ms, |m| 0.49 * 0.98f64.powi(m as i32) + 0.5);
        let fit = fit_zeroth(&data).unwrap();
        let p = fit.params.unwrap();
        assert!((p.p - 0.98).abs() < 1e-8);
        assert!((p.a - 0.49).abs() < 1e-8);
        assert!((p.b - 0.5).abs() < 1e-8);
        assert!(fit.converged && !fit.boundary_hit && !fit.flat_curve);
        assert!((fit.r.unwrap() - 0.01).abs() < 1e-8);
    }

    #[test]
    fn recovers_exact_first_order_data() {
        let ms = [1, 2, 3, 5, 8, 12, 20, 30, 50, 80];
        let truth = [0.95, 0.5, 0.5, 0.002];
        let data = synthetic(&ms, |m| model_value(&truth, m as f64));
        let fit = fit_first(&data).unwrap();
        let p = fit.params.unwrap();
        assert!((p.p - 0.95).abs() < 1e-6, "{fit:?}");
        assert!((p.d.unwrap() - 0.002).abs() < 1e-6);
    }

    #[test]
    fn flat_data_is_flagged() {
        let data = synthetic(&[1, 2, 4, 8], |_| 1.0);
        let fit = fit_zeroth(&data).unwrap();
        assert!(fit.flat_curve && fit.params.is_none());
        let cmp = compare_models(&data).unwrap();
        assert!(cmp.flat_curve && cmp.gate_dependent.is_none());
    }

    #[test]
    fn too_few_lengths() {
        let data = synthetic(&[1, 2, 3], |m| 0.5 + 0.4 * 0.9f64.powi(m as i32));
        assert!(fit_zeroth(&data).is_ok());
        assert!(matches!(fit_first(&data), Err(RbError::Contract(_))));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let theta = [0.93, 0.4, 0.55, 0.01];
        for m in [1.0, 2.0, 3.0, 7.0] {
            let row = jacobian_row(&theta, m);
            for i in 0..4 {
                let mut up = theta;
                let mut dn = theta;
                up[i] += 1e-6;
                dn[i] -= 1e-6;
                let fd = (model_value(&up, m) - model_value(&dn, m)) / 2e-6;
                assert!((fd - row[i]).abs() < 1e-7, "m={m} i={i}");
            }
        }
    }
}
