use std::borrow::Cow;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{pauli_matrix, unitary_channel, CMatrix, KrausSet, Superoperator};
use crate::clifford::{
    decompose, gate_unitary, to_superoperator, CliffordElement, CliffordGroup, Gate,
    DEFAULT_DENSE_LIMIT,
};
use super::pauli_state::{apply_local_ptm, PauliAction};
use crate::error::{RbError, Result};

/// How the error map `Λ_{i,j}` depends on the Clifford index `i` and step `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    GateIndependent,
    GateDependent,
    TimeDependent,
    /// Gate-dependent noise built from per-generator channels.
    GeneratorClass,
}

/// Rotation axis for over-rotation noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

/// Noise applied at one time step.
#[derive(Clone, Debug)]
pub enum StepNoise {
    Fixed(Superoperator),
    /// One channel per element of the enumerated group.
    PerElement(Vec<Superoperator>),
}

/// Per-generator error channels; the noise of a Clifford is accumulated over
/// its decomposition. Single-qubit channels act on the gate's qubit, the CNOT
/// channel on `(control, target)` with the control as the leading factor.
#[derive(Clone, Debug)]
pub struct GeneratorNoise {
    pub h: Superoperator,
    pub s: Superoperator,
    pub cnot: Superoperator,
    pub pauli: Superoperator,
}

/// A channel together with its real Pauli transfer matrix.
#[derive(Clone, Debug)]
struct Chan {
    s: Superoperator,
    r: DMatrix<f64>,
}

impl Chan {
    fn new(s: Superoperator) -> Result<Self> {
        let r = s.real_ptm()?;
        Ok(Chan { s, r })
    }
}

#[derive(Clone, Debug)]
enum StepChan {
    Fixed(Chan),
    PerElement(Vec<Chan>),
}

#[derive(Clone, Debug)]
enum Kind {
    Fixed(Chan),
    PerElement(Vec<Chan>),
    Steps(Vec<StepChan>),
    Generators(Box<GeneratorKraus>),
}

#[derive(Clone, Debug)]
struct GeneratorKraus {
    h: KrausSet,
    s: KrausSet,
    cnot: KrausSet,
    pauli: KrausSet,
    h_ptm: DMatrix<f64>,
    s_ptm: DMatrix<f64>,
    cnot_ptm: DMatrix<f64>,
    pauli_ptm: DMatrix<f64>,
}

/// Assignment of an error map `Λ_{i,j}` to each Clifford `i` at step `j ≥ 1`,
/// so that the noisy gate is `Λ_{i,j} ∘ C_i`.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    n: usize,
    kind: Kind,
    group: Option<Arc<CliffordGroup>>,
}

fn check_channel(s: &Superoperator, d: usize, what: &str) -> Result<()> {
    if s.dim() != d {
        return Err(RbError::Shape(format!(
            "{what}: channel dimension {} does not match d={d}",
            s.dim()
        )));
    }
    s.check_cptp()
        .map_err(|e| RbError::Contract(format!("{what}: {e}")))
}

fn check_dense_n(n: usize) -> Result<()> {
    if n == 0 || n > DEFAULT_DENSE_LIMIT {
        return Err(RbError::Capacity(format!(
            "noise models support 1..={DEFAULT_DENSE_LIMIT} qubits, got {n}"
        )));
    }
    Ok(())
}

impl NoiseModel {
    /// The same channel after every gate.
    pub fn gate_independent(n: usize, channel: Superoperator) -> Result<Self> {
        check_dense_n(n)?;
        check_channel(&channel, 1 << n, "gate-independent noise")?;
        Ok(NoiseModel {
            n,
            kind: Kind::Fixed(Chan::new(channel)?),
            group: None,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        NoiseModel::gate_independent(n, Superoperator::identity(1 << n))
    }

    /// One channel per element of `group`, in enumeration order.
    pub fn gate_dependent(group: Arc<CliffordGroup>, channels: Vec<Superoperator>) -> Result<Self> {
        let n = group.num_qubits();
        if channels.len() != group.len() {
            return Err(RbError::Shape(format!(
                "gate-dependent noise needs {} channels, got {}",
                group.len(),
                channels.len()
            )));
        }
        for (i, c) in channels.iter().enumerate() {
            check_channel(c, 1 << n, &format!("channel {i}"))?;
        }
        Ok(NoiseModel {
            n,
            kind: Kind::PerElement(channels.into_iter().map(Chan::new).collect::<Result<_>>()?),
            group: Some(group),
        })
    }

    /// Step-by-step noise for steps `1..=steps.len()`.
    pub fn time_dependent(n: usize, steps: Vec<StepNoise>) -> Result<Self> {
        check_dense_n(n)?;
        if steps.is_empty() {
            return Err(RbError::Contract("time-dependent noise needs at least one step".into()));
        }
        let mut group = None;
        for (j, step) in steps.iter().enumerate() {
            match step {
                StepNoise::Fixed(c) => check_channel(c, 1 << n, &format!("step {}", j + 1))?,
                StepNoise::PerElement(cs) => {
                    let g = match &group {
                        Some(g) => Arc::clone(g),
                        None => {
                            let g = Arc::new(CliffordGroup::enumerate(n)?);
                            group = Some(Arc::clone(&g));
                            g
                        }
                    };
                    if cs.len() != g.len() {
                        return Err(RbError::Shape(format!(
                            "step {} needs {} channels, got {}",
                            j + 1,
                            g.len(),
                            cs.len()
                        )));
                    }
                    for (i, c) in cs.iter().enumerate() {
                        check_channel(c, 1 << n, &format!("step {} channel {i}", j + 1))?;
                    }
                }
            }
        }
        let steps = steps
            .into_iter()
            .map(|s| match s {
                StepNoise::Fixed(c) => Ok(StepChan::Fixed(Chan::new(c)?)),
                StepNoise::PerElement(cs) => Ok(StepChan::PerElement(
                    cs.into_iter().map(Chan::new).collect::<Result<_>>()?,
                )),
            })
            .collect::<Result<_>>()?;
        Ok(NoiseModel {
            n,
            kind: Kind::Steps(steps),
            group,
        })
    }

    /// Noise attached to generators; usable beyond the enumerable range.
    pub fn generator_class(n: usize, noise: GeneratorNoise) -> Result<Self> {
        check_dense_n(n)?;
        check_channel(&noise.h, 2, "H noise")?;
        check_channel(&noise.s, 2, "S noise")?;
        check_channel(&noise.pauli, 2, "Pauli noise")?;
        check_channel(&noise.cnot, 4, "CNOT noise")?;
        Ok(NoiseModel {
            n,
            kind: Kind::Generators(Box::new(GeneratorKraus {
                h: noise.h.to_kraus()?,
                s: noise.s.to_kraus()?,
                cnot: noise.cnot.to_kraus()?,
                pauli: noise.pauli.to_kraus()?,
                h_ptm: noise.h.real_ptm()?,
                s_ptm: noise.s.real_ptm()?,
                cnot_ptm: noise.cnot.real_ptm()?,
                pauli_ptm: noise.pauli.real_ptm()?,
            })),
            group: None,
        })
    }

    /// `Λ_i = exp(−iθ_i P/2)` on every qubit, one angle per group element.
    pub fn gate_dependent_unitary(n: usize, angles: &[f64], axis: Axis) -> Result<Self> {
        let group = Arc::new(CliffordGroup::enumerate(n)?);
        if angles.len() != group.len() {
            return Err(RbError::Shape(format!(
                "need {} angles, got {}",
                group.len(),
                angles.len()
            )));
        }
        let channels = angles
            .iter()
            .map(|&theta| unitary_channel(&rotation(n, axis, theta)))
            .collect::<Result<Vec<_>>>()?;
        NoiseModel::gate_dependent(group, channels)
    }

    /// Over-rotation angles drawn uniformly from `[−max_angle, max_angle]`.
    pub fn random_over_rotation<R: Rng + ?Sized>(
        n: usize,
        max_angle: f64,
        axis: Axis,
        rng: &mut R,
    ) -> Result<Self> {
        let size = CliffordGroup::enumerate(n)?.len();
        let angles: Vec<f64> = (0..size)
            .map(|_| rng.random_range(-max_angle..=max_angle))
            .collect();
        NoiseModel::gate_dependent_unitary(n, &angles, axis)
    }

    /// `Λ_i = C_i†`: every noisy gate is the identity.
    pub fn inverse_gate_pathology(n: usize) -> Result<Self> {
        let group = Arc::new(CliffordGroup::enumerate(n)?);
        let channels = group
            .elements()
            .iter()
            .map(|g| to_superoperator(g).map(|s| s.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        NoiseModel::gate_dependent(group, channels)
    }

    /// This model as one step of a time-dependent model.
    pub fn into_step(self) -> Result<StepNoise> {
        match self.kind {
            Kind::Fixed(c) => Ok(StepNoise::Fixed(c.s)),
            Kind::PerElement(cs) => Ok(StepNoise::PerElement(cs.into_iter().map(|c| c.s).collect())),
            _ => Err(RbError::UnsupportedMode(
                "time-dependent steps must be gate-independent or group-indexed".into(),
            )),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn mode(&self) -> NoiseMode {
        match self.kind {
            Kind::Fixed(_) => NoiseMode::GateIndependent,
            Kind::PerElement(_) => NoiseMode::GateDependent,
            Kind::Steps(_) => NoiseMode::TimeDependent,
            Kind::Generators(_) => NoiseMode::GeneratorClass,
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self.kind, Kind::Steps(_))
    }

    /// `true` when `Λ_{i,j}` does not depend on `i` at any step.
    pub fn is_gate_independent(&self) -> bool {
        match &self.kind {
            Kind::Fixed(_) => true,
            Kind::Steps(steps) => steps.iter().all(|s| matches!(s, StepChan::Fixed(_))),
            _ => false,
        }
    }

    /// Largest supported step index, if the model has a finite horizon.
    pub fn horizon(&self) -> Option<usize> {
        match &self.kind {
            Kind::Steps(steps) => Some(steps.len()),
            _ => None,
        }
    }

    /// Contract error unless sequences of length `m` (steps `1..=m+1`) are covered.
    pub fn check_length(&self, m: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if m + 1 > h => Err(RbError::Contract(format!(
                "time-dependent noise covers {h} steps but length {m} needs {}",
                m + 1
            ))),
            _ => Ok(()),
        }
    }

    fn index_in_group(&self, g: &CliffordElement) -> Result<usize> {
        let group = self
            .group
            .as_ref()
            .expect("group-indexed noise carries its group");
        group
            .index_of(g)
            .ok_or_else(|| RbError::Shape("element does not belong to the noise group".into()))
    }

    /// `Λ_{g, step}` for a Clifford element `g` and step `≥ 1`.
    pub fn channel(&self, g: &CliffordElement, step: usize) -> Result<Cow<'_, Superoperator>> {
        if g.num_qubits() != self.n {
            return Err(RbError::Shape(format!(
                "element acts on {} qubits, noise on {}",
                g.num_qubits(),
                self.n
            )));
        }
        match &self.kind {
            Kind::Generators(gk) => Ok(Cow::Owned(generator_error(self.n, gk, g)?)),
            _ => Ok(Cow::Borrowed(&self.chan(g, step)?.s)),
        }
    }

    fn step_chan(&self, step: usize) -> Result<&StepChan> {
        match &self.kind {
            Kind::Steps(steps) => steps.get(step.wrapping_sub(1)).ok_or_else(|| {
                RbError::Contract(format!("step {step} outside 1..={}", steps.len()))
            }),
            _ => unreachable!("only time-dependent models have steps"),
        }
    }

    fn chan(&self, g: &CliffordElement, step: usize) -> Result<&Chan> {
        match &self.kind {
            Kind::Fixed(c) => Ok(c),
            Kind::PerElement(cs) => Ok(&cs[self.index_in_group(g)?]),
            Kind::Steps(_) => match self.step_chan(step)? {
                StepChan::Fixed(c) => Ok(c),
                StepChan::PerElement(cs) => Ok(&cs[self.index_in_group(g)?]),
            },
            Kind::Generators(_) => unreachable!("generator noise has no cached channels"),
        }
    }

    /// Noisy gate `Λ_{g,step} ∘ C_g` applied to Pauli coordinates.
    pub(crate) fn apply_step(
        &self,
        g: &CliffordElement,
        action: &PauliAction,
        step: usize,
        r: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        match &self.kind {
            Kind::Generators(gk) => {
                let mut r = r.clone();
                for gate in decompose(g).gates() {
                    r = PauliAction::new(&gate.element(self.n))?.apply(&r);
                    let (ptm, qubits): (&DMatrix<f64>, Vec<usize>) = match *gate {
                        Gate::H(q) => (&gk.h_ptm, vec![q]),
                        Gate::S(q) => (&gk.s_ptm, vec![q]),
                        Gate::X(q) | Gate::Y(q) | Gate::Z(q) => (&gk.pauli_ptm, vec![q]),
                        Gate::Cnot(c, t) => (&gk.cnot_ptm, vec![c, t]),
                    };
                    apply_local_ptm(&mut r, ptm, &qubits, self.n);
                }
                Ok(r)
            }
            _ => Ok(&self.chan(g, step)?.r * action.apply(r)),
        }
    }

    /// `Λ_{i, step}` for the `i`-th element of the enumerated group.
    pub(crate) fn channel_at(
        &self,
        group: &CliffordGroup,
        i: usize,
        step: usize,
    ) -> Result<Cow<'_, Superoperator>> {
        match &self.kind {
            Kind::PerElement(cs) => Ok(Cow::Borrowed(&cs[i].s)),
            Kind::Steps(_) => match self.step_chan(step)? {
                StepChan::PerElement(cs) => Ok(Cow::Borrowed(&cs[i].s)),
                StepChan::Fixed(c) => Ok(Cow::Borrowed(&c.s)),
            },
            _ => self.channel(group.get(i), step),
        }
    }
}

/// `exp(−iθ P/2)` applied to every qubit.
pub fn rotation(n: usize, axis: Axis, theta: f64) -> CMatrix {
    let p = pauli_matrix(1, axis.pauli_index());
    let single = CMatrix::identity(2, 2) * Complex64::new((theta / 2.0).cos(), 0.0)
        - p * Complex64::new(0.0, (theta / 2.0).sin());
    (0..n).fold(CMatrix::identity(1, 1), |acc, _| acc.kronecker(&single))
}

/// Lift an operator on `qubits` (first listed = most significant) to `n` qubits.
pub fn embed_operator(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let d = 1usize << n;
    let k = qubits.len();
    let bit = |b: usize, q: usize| (b >> (n - 1 - q)) & 1;
    let local = |b: usize| qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(b, q));
    let mut mask = 0usize;
    for &q in qubits {
        mask |= 1 << (n - 1 - q);
    }
    let mut out = CMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            if r & !mask == c & !mask {
                out[(r, c)] = op[(local(r), local(c))];
            }
        }
    }
    debug_assert_eq!(op.nrows(), 1 << k);
    out
}

fn embedded_channel(k: &KrausSet, qubits: &[usize], n: usize) -> Superoperator {
    let ops = k.ops().iter().map(|a| embed_operator(a, qubits, n)).collect();
    KrausSet::new(ops).expect("nonempty").to_superoperator()
}

/// `Λ_g = E_g ∘ C_g†` with `E_g` the noisy generator circuit for `g`.
fn generator_error(n: usize, gk: &GeneratorKraus, g: &CliffordElement) -> Result<Superoperator> {
    let d = 1usize << n;
    let mut noisy = Superoperator::identity(d);
    for gate in decompose(g).gates() {
        let u = unitary_channel(&gate_unitary(gate, n)?)?;
        let err = match *gate {
            Gate::H(q) => embedded_channel(&gk.h, &[q], n),
            Gate::S(q) => embedded_channel(&gk.s, &[q], n),
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) => embedded_channel(&gk.pauli, &[q], n),
            Gate::Cnot(c, t) => embedded_channel(&gk.cnot, &[c, t], n),
        };
        noisy = err.compose(&u)?.compose(&noisy)?;
    }
    noisy.compose(&to_superoperator(g)?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, depolarizing};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn non_cptp_channels_are_rejected() {
        let bad = Superoperator::zero(2);
        assert!(matches!(
            NoiseModel::gate_independent(1, bad),
            Err(RbError::Contract(_))
        ));
        assert!(NoiseModel::gate_independent(1, depolarizing(0.9, 4).unwrap()).is_err());
    }

    #[test]
    fn pathology_channels_undo_gates() {
        let noise = NoiseModel::inverse_gate_pathology(1).unwrap();
        let group = CliffordGroup::enumerate(1).unwrap();
        for g in group.elements() {
            let c = to_superoperator(g).unwrap();
            let noisy = noise.channel(g, 1).unwrap().compose(&c).unwrap();
            assert!(noisy.max_abs_diff(&Superoperator::identity(2)) < 1e-12);
        }
        assert_eq!(noise.mode(), NoiseMode::GateDependent);
    }

    #[test]
    fn generator_noise_with_identity_channels_is_trivial() {
        let id2 = Superoperator::identity(2);
        let gn = GeneratorNoise {
            h: id2.clone(),
            s: id2.clone(),
            cnot: Superoperator::identity(4),
            pauli: id2,
        };
        let noise = NoiseModel::generator_class(3, gn).unwrap();
        let g = crate::clifford::random_clifford(3, &mut ChaCha8Rng::seed_from_u64(2));
        let lam = noise.channel(&g, 1).unwrap();
        assert!(lam.max_abs_diff(&Superoperator::identity(8)) < 1e-10);
    }

    #[test]
    fn generator_noise_is_cptp() {
        let gn = GeneratorNoise {
            h: depolarizing(0.99, 2).unwrap(),
            s: amplitude_damping(0.01).unwrap(),
            cnot: depolarizing(0.98, 4).unwrap(),
            pauli: Superoperator::identity(2),
        };
        let noise = NoiseModel::generator_class(2, gn).unwrap();
        let g = crate::clifford::random_clifford(2, &mut ChaCha8Rng::seed_from_u64(4));
        assert!(noise.channel(&g, 1).unwrap().is_cptp());
    }

    #[test]
    fn embedding_matches_kronecker() {
        let x = pauli_matrix(1, 1);
        let z = pauli_matrix(1, 3);
        let xz = x.kronecker(&z);
        assert_eq!(embed_operator(&x, &[0], 2), x.kronecker(&CMatrix::identity(2, 2)));
        assert_eq!(embed_operator(&x, &[1], 2), CMatrix::identity(2, 2).kronecker(&x));
        assert_eq!(embed_operator(&xz, &[0, 1], 2), xz);
        assert_eq!(embed_operator(&xz, &[1, 0], 2), z.kronecker(&x));
    }

    #[test]
    fn time_dependent_horizon() {
        let steps = vec![
            StepNoise::Fixed(depolarizing(0.99, 2).unwrap()),
            StepNoise::Fixed(depolarizing(0.98, 2).unwrap()),
        ];
        let noise = NoiseModel::time_dependent(1, steps).unwrap();
        assert!(noise.check_length(1).is_ok());
        assert!(noise.check_length(2).is_err());
        assert!(noise.is_gate_independent());
    }
}
