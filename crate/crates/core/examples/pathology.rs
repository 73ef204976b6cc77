//! Noise that undoes each gate: every sequence returns to |0⟩, so the curve is
//! flat even though the gates are maximally wrong.
//!
//! `cargo run --release --example pathology`

use rblab::engine::{
    exact_average_curve, gamma, model_coefficients, pathology_probe, NoiseModel, SpamSpec,
    PATHOLOGY_THRESHOLD,
};
use rblab::fitting::classify_flat_curve;

fn main() -> rblab::Result<()> {
    let noise = NoiseModel::inverse_gate_pathology(1)?;
    let spam = SpamSpec::ideal(1);
    let curve = exact_average_curve(&[1, 2, 5, 10], &noise, &spam)?;
    println!("exact survival: {curve:?}");
    println!("gamma: {:?}", gamma(&noise)?);

    let coeffs = model_coefficients(&noise, &spam)?;
    println!("flat curve: {:?}", classify_flat_curve(&coeffs, &spam));

    let report = pathology_probe(&noise, PATHOLOGY_THRESHOLD)?;
    println!(
        "{} probes, {} flagged, mean return {:.3}, pathological: {}",
        report.probes,
        report.flagged,
        report.mean_return,
        report.pathological
    );
    Ok(())
}
