use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::noise::NoiseModel;
use super::pauli_state::pauli_coords;
use super::simulate::sequence_survival;
use super::spam::SpamSpec;
use crate::clifford::{to_superoperator, CliffordElement, CliffordGroup};
use crate::error::{RbError, Result};

/// Budget for the transfer recursion, in scalar multiply-adds.
pub const MAX_TRANSFER_WORK: f64 = 5e8;
/// Largest number of sequences the direct oracle enumerates.
pub const MAX_DIRECT_SEQUENCES: f64 = 2e7;

/// Multiplication table, inverses and Clifford PTMs of an enumerated group.
pub struct GroupTables {
    group: CliffordGroup,
    mult: Vec<u32>,
    inv: Vec<u32>,
    ptms: Vec<DMatrix<f64>>,
}

impl GroupTables {
    pub fn new(n: usize) -> Result<Self> {
        let group = CliffordGroup::enumerate(n)?;
        let size = group.len();
        let index = |g: &CliffordElement| group.index_of(g).expect("closed under products") as u32;
        let mut mult = vec![0u32; size * size];
        for (c, gc) in group.elements().iter().enumerate() {
            for (g, gg) in group.elements().iter().enumerate() {
                mult[c * size + g] = index(&gc.compose(gg)?);
            }
        }
        let inv = group.elements().iter().map(|g| index(&g.inverse())).collect();
        let ptms = group
            .elements()
            .iter()
            .map(|g| to_superoperator(g)?.real_ptm())
            .collect::<Result<_>>()?;
        Ok(GroupTables {
            group,
            mult,
            inv,
            ptms,
        })
    }

    pub fn group(&self) -> &CliffordGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.group.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group.is_empty()
    }

    /// Index of `C_c ∘ C_g`.
    pub fn product(&self, c: usize, g: usize) -> usize {
        self.mult[c * self.len() + g] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g] as usize
    }

    /// Real PTM of the `i`-th Clifford.
    pub fn ptm(&self, i: usize) -> &DMatrix<f64> {
        &self.ptms[i]
    }

    /// PTMs of `Λ_{c,step} ∘ C_c` for every `c`.
    fn noisy_ptms(&self, noise: &NoiseModel, step: usize) -> Result<Vec<DMatrix<f64>>> {
        (0..self.len())
            .map(|c| Ok(noise.channel_at(&self.group, c, step)?.real_ptm()? * &self.ptms[c]))
            .collect()
    }
}

fn check_inputs(ms: &[usize], noise: &NoiseModel, spam: &SpamSpec) -> Result<usize> {
    if spam.dim() != noise.dim() {
        return Err(RbError::Shape("SPAM and noise dimensions differ".into()));
    }
    if ms.iter().any(|&m| m < 1) {
        return Err(RbError::Contract("sequence lengths must be >= 1".into()));
    }
    let m_max = ms.iter().copied().max().unwrap_or(0);
    noise.check_length(m_max)?;
    Ok(m_max)
}

/// Exact `F(m) = avg over all Clifford words of Tr[E S(ρ)]` for each `m` in `ms`.
///
/// Single-qubit models use a transfer recursion over group indices. Two-qubit
/// models are supported when the noise is gate-independent at every step,
/// where the average collapses to `Λ_{m+1} ∘ D_{p_m} ∘ … ∘ D_{p_1}`.
pub fn exact_average_curve(ms: &[usize], noise: &NoiseModel, spam: &SpamSpec) -> Result<Vec<f64>> {
    let m_max = check_inputs(ms, noise, spam)?;
    let n = noise.num_qubits();
    if n >= 2 && noise.is_gate_independent() {
        return ms.iter().map(|&m| twirled_average(m, noise, spam)).collect();
    }
    if n > 2 {
        return Err(RbError::Capacity(format!(
            "exact averages need an enumerable group; n={n} is too large"
        )));
    }
    let size = crate::clifford::clifford_group_order(n).expect("small n") as f64;
    let d4 = (1usize << (4 * n)) as f64;
    let work = size * size * d4 * (m_max + 1) as f64;
    if work > MAX_TRANSFER_WORK {
        return Err(RbError::Capacity(format!(
            "transfer recursion needs ~{work:.1e} operations (limit {MAX_TRANSFER_WORK:.0e})"
        )));
    }
    let tables = GroupTables::new(n)?;
    transfer_curve(&tables, ms, m_max, noise, spam)
}

/// `F(m)` for a single length; see [`exact_average_curve`].
pub fn exact_average_fidelity(m: usize, noise: &NoiseModel, spam: &SpamSpec) -> Result<f64> {
    Ok(exact_average_curve(&[m], noise, spam)?[0])
}

fn transfer_curve(
    tables: &GroupTables,
    ms: &[usize],
    m_max: usize,
    noise: &NoiseModel,
    spam: &SpamSpec,
) -> Result<Vec<f64>> {
    let n = noise.num_qubits();
    let size = tables.len();
    let d = noise.dim() as f64;
    let dim = 1usize << (2 * n);
    let e = pauli_coords(n, spam.effect());
    let id = tables
        .group()
        .index_of(&CliffordElement::identity(n))
        .expect("identity is enumerated");
    let mut v = vec![DVector::<f64>::zeros(dim); size];
    v[id] = pauli_coords(n, spam.rho().matrix());

    let fixed = if noise.is_time_dependent() {
        None
    } else {
        Some(tables.noisy_ptms(noise, 1)?)
    };
    let mut out = vec![f64::NAN; ms.len()];
    for t in 1..=m_max {
        let step_ptms;
        let ms_t: &[DMatrix<f64>] = match &fixed {
            Some(p) => p,
            None => {
                step_ptms = tables.noisy_ptms(noise, t)?;
                &step_ptms
            }
        };
        let mut next = vec![DVector::<f64>::zeros(dim); size];
        for (g, vg) in v.iter().enumerate() {
            if vg.iter().all(|x| *x == 0.0) {
                continue;
            }
            for (c, mc) in ms_t.iter().enumerate() {
                next[tables.product(c, g)] += mc * vg;
            }
        }
        for x in next.iter_mut() {
            *x /= size as f64;
        }
        v = next;

        if ms.contains(&t) {
            let last_step;
            let last: &[DMatrix<f64>] = match &fixed {
                Some(p) => p,
                None => {
                    last_step = tables.noisy_ptms(noise, t + 1)?;
                    &last_step
                }
            };
            let f: f64 = v
                .iter()
                .enumerate()
                .map(|(g, vg)| e.dot(&(&last[tables.inverse(g)] * vg)))
                .sum::<f64>()
                / d;
            for (slot, _) in out.iter_mut().zip(ms).filter(|(_, &m)| m == t) {
                *slot = f;
            }
        }
    }
    Ok(out)
}

fn twirled_average(m: usize, noise: &NoiseModel, spam: &SpamSpec) -> Result<f64> {
    let d = noise.dim();
    let id = CliffordElement::identity(noise.num_qubits());
    let mut scale = 1.0;
    for j in 1..=m {
        scale *= noise.channel(&id, j)?.depolarizing_parameter();
    }
    let mixed = crate::channels::CMatrix::identity(d, d) / num_complex::Complex64::new(d as f64, 0.0);
    let state = (spam.rho().matrix() - &mixed) * num_complex::Complex64::new(scale, 0.0) + &mixed;
    Ok(spam.measure(&noise.channel(&id, m + 1)?.apply_operator(&state)?))
}

/// Brute-force average over all `|Clif|^m` words; a test oracle for small `m`.
pub fn direct_average_fidelity(m: usize, noise: &NoiseModel, spam: &SpamSpec) -> Result<f64> {
    check_inputs(&[m], noise, spam)?;
    let n = noise.num_qubits();
    let group = CliffordGroup::enumerate(n)?;
    let size = group.len();
    let count = (size as f64).powi(m as i32);
    if count > MAX_DIRECT_SEQUENCES {
        return Err(RbError::Capacity(format!(
            "{count:.1e} sequences exceed the direct-sum limit"
        )));
    }
    let total: f64 = (0..size)
        .into_par_iter()
        .map(|first| -> Result<f64> {
            let mut acc = 0.0;
            let mut digits = vec![0usize; m];
            digits[0] = first;
            loop {
                let mut seq: Vec<CliffordElement> =
                    digits.iter().map(|&i| group.get(i).clone()).collect();
                let total = seq
                    .iter()
                    .try_fold(CliffordElement::identity(n), |a, c| c.compose(&a))?;
                seq.push(total.inverse());
                acc += sequence_survival(&seq, noise, spam)?;
                let mut k = 1;
                while k < m {
                    digits[k] += 1;
                    if digits[k] < size {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k >= m {
                    break;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(total / count)
}
