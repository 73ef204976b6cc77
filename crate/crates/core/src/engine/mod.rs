//! Noise models, RB simulation, exact averages and the perturbative model.

mod config;
mod dataset;
mod diagnostics;
mod exact;
mod model;
mod noise;
mod pauli_state;
mod simulate;
mod spam;

pub use config::{ExperimentConfig, NoiseSpec, SpamJson};
pub use dataset::{CurvePoint, RbDataset, Record};
pub use diagnostics::{
    hoeffding_k, pathology_probe, pathology_probes, HoeffdingPlan, PathologyReport,
    PATHOLOGY_THRESHOLD,
};
pub use exact::{
    direct_average_fidelity, exact_average_curve, exact_average_fidelity, GroupTables,
    MAX_DIRECT_SEQUENCES, MAX_TRANSFER_WORK,
};
pub use model::{
    average_error_operator, binomial, first_order_prediction, gamma, model_coefficients,
    perturbation_bound, step_average_error_operator, ModelCoefficients,
};
pub use noise::{embed_operator, rotation, Axis, GeneratorNoise, NoiseMode, NoiseModel, StepNoise};
pub use simulate::{
    generate_sequence, record_rng, run_experiment, sequence_superoperator, sequence_survival,
    RbConfig,
};
pub use spam::{SpamSpec, EFFECT_TOL};
