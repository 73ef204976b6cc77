use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{RbDataset, Record};
use super::noise::NoiseModel;
use super::pauli_state::{pauli_coords, PauliAction};
use super::spam::SpamSpec;
use crate::channels::Superoperator;
use crate::clifford::{random_clifford, to_superoperator, CliffordElement};
use crate::error::{RbError, Result};

/// Sequence lengths, sequences per length, shots per sequence and master seed.
/// `shots = 0` records the exact survival probability of each sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbConfig {
    pub n: usize,
    pub m_list: Vec<usize>,
    pub k: usize,
    pub shots: u64,
    pub seed: u64,
}

impl RbConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(RbError::Domain("n must be at least 1".into()));
        }
        if self.m_list.is_empty() {
            return Err(RbError::Contract("m_list is empty".into()));
        }
        if self.m_list[0] < 1 || self.m_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(RbError::Contract(
                "m_list must be strictly increasing with entries >= 1".into(),
            ));
        }
        if self.k < 1 {
            return Err(RbError::Contract("k must be at least 1".into()));
        }
        let last = *self.m_list.last().expect("nonempty");
        if last as u64 >= 1 << 32 || self.k as u64 >= 1 << 32 {
            return Err(RbError::Capacity("m and k must fit in 32 bits".into()));
        }
        Ok(())
    }
}

/// Generator for record `(m, seq)`: the master seed with stream `m·2³² + seq`.
pub fn record_rng(seed: u64, m: usize, seq: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 32) | seq as u64);
    rng
}

/// `m` uniformly random Cliffords followed by the inverse of their product.
pub fn generate_sequence<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Vec<CliffordElement> {
    let mut seq = Vec::with_capacity(m + 1);
    let mut total = CliffordElement::identity(n);
    for _ in 0..m {
        let c = random_clifford(n, rng);
        total = c.compose(&total).expect("same register");
        seq.push(c);
    }
    seq.push(total.inverse());
    seq
}

/// `S = Λ_{m+1} C_{m+1} ∘ … ∘ Λ_1 C_1` for a full sequence (inverse included).
pub fn sequence_superoperator(seq: &[CliffordElement], noise: &NoiseModel) -> Result<Superoperator> {
    noise.check_length(seq.len().saturating_sub(1))?;
    let mut s = Superoperator::identity(noise.dim());
    for (j, g) in seq.iter().enumerate() {
        let step = noise.channel(g, j + 1)?.compose(&to_superoperator(g)?)?;
        s = step.compose(&s)?;
    }
    Ok(s)
}

/// `Tr[E S(ρ)]` for a full sequence, clamped to `[0, 1]`.
pub fn sequence_survival(seq: &[CliffordElement], noise: &NoiseModel, spam: &SpamSpec) -> Result<f64> {
    check_spam(noise, spam)?;
    noise.check_length(seq.len().saturating_sub(1))?;
    propagate(seq, noise, &Readout::new(noise.num_qubits(), spam))
}

struct Readout {
    rho: DVector<f64>,
    effect: DVector<f64>,
}

impl Readout {
    fn new(n: usize, spam: &SpamSpec) -> Self {
        Readout {
            rho: pauli_coords(n, spam.rho().matrix()),
            effect: pauli_coords(n, spam.effect()),
        }
    }
}

fn propagate(seq: &[CliffordElement], noise: &NoiseModel, io: &Readout) -> Result<f64> {
    let mut r = io.rho.clone();
    for (j, g) in seq.iter().enumerate() {
        r = noise.apply_step(g, &PauliAction::new(g)?, j + 1, &r)?;
    }
    Ok((io.effect.dot(&r) / noise.dim() as f64).clamp(0.0, 1.0))
}

fn check_spam(noise: &NoiseModel, spam: &SpamSpec) -> Result<()> {
    if spam.dim() != noise.dim() {
        return Err(RbError::Shape(format!(
            "SPAM has d={}, noise has d={}",
            spam.dim(),
            noise.dim()
        )));
    }
    Ok(())
}

/// Simulate every `(m, seq)` record in parallel. Records come back ordered by
/// `m` then `seq` and depend only on `cfg`, not on the thread count.
pub fn run_experiment(cfg: &RbConfig, noise: &NoiseModel, spam: &SpamSpec) -> Result<RbDataset> {
    cfg.validate()?;
    if cfg.n != noise.num_qubits() {
        return Err(RbError::Shape(format!(
            "config has n={}, noise has n={}",
            cfg.n,
            noise.num_qubits()
        )));
    }
    check_spam(noise, spam)?;
    noise.check_length(*cfg.m_list.last().expect("validated"))?;
    let jobs: Vec<(usize, usize)> = cfg
        .m_list
        .iter()
        .flat_map(|&m| (0..cfg.k).map(move |s| (m, s)))
        .collect();
    let io = Readout::new(cfg.n, spam);
    let records = jobs
        .par_iter()
        .map(|&(m, seq)| {
            let mut rng = record_rng(cfg.seed, m, seq);
            let word = generate_sequence(m, cfg.n, &mut rng);
            let p = propagate(&word, noise, &io)?;
            Ok(if cfg.shots == 0 {
                Record {
                    m,
                    seq,
                    survival: p,
                    successes: None,
                    shots: 0,
                }
            } else {
                let k = Binomial::new(cfg.shots, p)
                    .map_err(|e| RbError::Domain(format!("binomial: {e}")))?
                    .sample(&mut rng);
                Record {
                    m,
                    seq,
                    survival: k as f64 / cfg.shots as f64,
                    successes: Some(k),
                    shots: cfg.shots,
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RbDataset::new(cfg.n, records)
}
