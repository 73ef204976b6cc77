//! JSON descriptions of noise, SPAM and whole experiments.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::noise::{embed_operator, Axis, GeneratorNoise, NoiseModel};
use super::simulate::RbConfig;
use super::spam::SpamSpec;
use crate::channels::{
    amplitude_damping, depolarizing, parse_matrix, ChannelJson, DensityMatrix, KrausSet, Superoperator,
};
use crate::clifford::CliffordGroup;
use crate::error::{RbError, Result};

fn default_axis() -> Axis {
    Axis::Z
}

/// Named noise families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    Identity,
    /// `pρ + (1 − p)𝟙/d` on the whole register.
    Depolarizing { p: f64 },
    /// Amplitude damping on every qubit.
    AmplitudeDamping { gamma: f64 },
    /// A fixed channel after every gate.
    Channel { channel: ChannelJson },
    /// Per-Clifford over-rotations: explicit `angles` (one per group element)
    /// or uniform draws from `[−max_angle, max_angle]` with `seed`.
    GateDependentUnitary {
        #[serde(default)]
        angles: Option<Vec<f64>>,
        #[serde(default)]
        max_angle: Option<f64>,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default = "default_axis")]
        axis: Axis,
    },
    /// `Λ_i = C_i†`.
    InverseGatePathology,
    /// One channel per group element in enumeration order.
    Custom { channels: Vec<ChannelJson> },
    /// One spec per step; each must be gate-independent or group-indexed.
    TimeDependent { steps: Vec<NoiseSpec> },
    /// Per-generator channels; `pauli` defaults to the identity.
    GeneratorClass {
        h: ChannelJson,
        s: ChannelJson,
        cnot: ChannelJson,
        #[serde(default)]
        pauli: Option<ChannelJson>,
    },
}

fn on_every_qubit(n: usize, single: &Superoperator) -> Result<Superoperator> {
    let kraus = single.to_kraus()?;
    let mut total = Superoperator::identity(1 << n);
    for q in 0..n {
        let ops = kraus.ops().iter().map(|k| embed_operator(k, &[q], n)).collect();
        total = KrausSet::new(ops)?.to_superoperator().compose(&total)?;
    }
    Ok(total)
}

impl NoiseSpec {
    pub fn build(&self, n: usize) -> Result<NoiseModel> {
        let d = 1usize << n;
        match self {
            NoiseSpec::Identity => NoiseModel::identity(n),
            NoiseSpec::Depolarizing { p } => NoiseModel::gate_independent(n, depolarizing(*p, d)?),
            NoiseSpec::AmplitudeDamping { gamma } => {
                NoiseModel::gate_independent(n, on_every_qubit(n, &amplitude_damping(*gamma)?)?)
            }
            NoiseSpec::Channel { channel } => {
                NoiseModel::gate_independent(n, channel.to_superoperator()?)
            }
            NoiseSpec::GateDependentUnitary {
                angles,
                max_angle,
                seed,
                axis,
            } => match (angles, max_angle) {
                (Some(a), None) => NoiseModel::gate_dependent_unitary(n, a, *axis),
                (None, Some(max)) => {
                    if !(max.is_finite() && *max >= 0.0) {
                        return Err(RbError::Domain(format!("max_angle must be >= 0, got {max}")));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
                    NoiseModel::random_over_rotation(n, *max, *axis, &mut rng)
                }
                _ => Err(RbError::Parse(
                    "gate_dependent_unitary needs exactly one of angles or max_angle".into(),
                )),
            },
            NoiseSpec::InverseGatePathology => NoiseModel::inverse_gate_pathology(n),
            NoiseSpec::Custom { channels } => {
                let group = Arc::new(CliffordGroup::enumerate(n)?);
                let chans = channels
                    .iter()
                    .map(ChannelJson::to_superoperator)
                    .collect::<Result<Vec<_>>>()?;
                NoiseModel::gate_dependent(group, chans)
            }
            NoiseSpec::TimeDependent { steps } => {
                let steps = steps
                    .iter()
                    .map(|s| s.build(n)?.into_step())
                    .collect::<Result<Vec<_>>>()?;
                NoiseModel::time_dependent(n, steps)
            }
            NoiseSpec::GeneratorClass { h, s, cnot, pauli } => NoiseModel::generator_class(
                n,
                GeneratorNoise {
                    h: h.to_superoperator()?,
                    s: s.to_superoperator()?,
                    cnot: cnot.to_superoperator()?,
                    pauli: match pauli {
                        Some(p) => p.to_superoperator()?,
                        None => Superoperator::identity(2),
                    },
                },
            ),
        }
    }
}

/// State preparation and measurement. Explicit `rho`/`effect` matrices take
/// precedence over the depolarizing error rates applied to `|0…0⟩`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpamJson {
    #[serde(default)]
    pub prep_error: f64,
    #[serde(default)]
    pub meas_error: f64,
    #[serde(default)]
    pub rho: Option<Value>,
    #[serde(default)]
    pub effect: Option<Value>,
}

impl SpamJson {
    pub fn build(&self, n: usize) -> Result<SpamSpec> {
        let d = 1usize << n;
        let base = SpamSpec::depolarized(n, self.prep_error, self.meas_error)?;
        let rho = match &self.rho {
            Some(v) => DensityMatrix::new(parse_matrix(v, d)?)?,
            None => base.rho().clone(),
        };
        let effect = match &self.effect {
            Some(v) => parse_matrix(v, d)?,
            None => base.effect().clone(),
        };
        SpamSpec::new(rho, effect)
    }
}

/// A complete simulation request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub run: RbConfig,
    pub noise: NoiseSpec,
    #[serde(default)]
    pub spam: SpamJson,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RbError::Parse(format!("bad config: {e}")))
    }

    pub fn build(&self) -> Result<(NoiseModel, SpamSpec)> {
        self.run.validate()?;
        Ok((self.noise.build(self.run.n)?, self.spam.build(self.run.n)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::noise::NoiseMode;

    #[test]
    fn parses_named_specs() {
        let cfg = ExperimentConfig::parse(
            r#"{"n":1,"m_list":[1,2,4],"k":3,"shots":10,"seed":5,
                "noise":{"type":"depolarizing","p":0.98},
                "spam":{"prep_error":0.01}}"#,
        )
        .unwrap();
        let (noise, spam) = cfg.build().unwrap();
        assert_eq!(noise.mode(), NoiseMode::GateIndependent);
        assert!((spam.rho().matrix()[(1, 1)].re - 0.005).abs() < 1e-15);

        let spec: NoiseSpec =
            serde_json::from_str(r#"{"type":"gate_dependent_unitary","max_angle":0.05,"seed":2}"#)
                .unwrap();
        assert_eq!(spec.build(1).unwrap().mode(), NoiseMode::GateDependent);

        let spec: NoiseSpec = serde_json::from_str(
            r#"{"type":"time_dependent","steps":[{"type":"identity"},{"type":"depolarizing","p":0.9}]}"#,
        )
        .unwrap();
        assert_eq!(spec.build(1).unwrap().horizon(), Some(2));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExperimentConfig::parse(r#"{"n":1}"#).is_err());
        let both: NoiseSpec = serde_json::from_str(
            r#"{"type":"gate_dependent_unitary","angles":[0.0],"max_angle":0.1}"#,
        )
        .unwrap();
        assert!(both.build(1).is_err());
        let nested: NoiseSpec = serde_json::from_str(
            r#"{"type":"time_dependent","steps":[{"type":"time_dependent","steps":[{"type":"identity"}]}]}"#,
        )
        .unwrap();
        assert!(matches!(nested.build(1), Err(RbError::UnsupportedMode(_))));
        let bad: NoiseSpec = serde_json::from_str(r#"{"type":"depolarizing","p":1.5}"#).unwrap();
        assert!(matches!(bad.build(1), Err(RbError::Domain(_))));
    }

    #[test]
    fn amplitude_damping_on_every_qubit() {
        let spec = NoiseSpec::AmplitudeDamping { gamma: 0.1 };
        let two = spec.build(2).unwrap();
        let id = crate::clifford::CliffordElement::identity(2);
        let ad = amplitude_damping(0.1).unwrap();
        let expected = ad.to_kraus().unwrap();
        let ops: Vec<_> = expected
            .ops()
            .iter()
            .flat_map(|a| expected.ops().iter().map(move |b| a.kronecker(b)))
            .collect();
        let tensor = KrausSet::new(ops).unwrap().to_superoperator();
        assert!(two.channel(&id, 1).unwrap().max_abs_diff(&tensor) < 1e-12);
    }
}
