//! Gate-dependent over-rotations: exact average fidelity against the zeroth-
//! and first-order models, and the γ-based bounds on their gap.
//!
//! `cargo run --release --example perturbation`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::engine::{
    exact_average_fidelity, first_order_prediction, gamma, model_coefficients, perturbation_bound, Axis,
    NoiseModel, SpamSpec,
};

fn main() -> rblab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let noise = NoiseModel::random_over_rotation(1, 0.15, Axis::X, &mut rng)?;
    let spam = SpamSpec::ideal(1);
    let coeffs = model_coefficients(&noise, &spam)?;
    let g = gamma(&noise)?;
    println!(
        "p={:.6} q={:.6} A0={:.4} B0={:.4} gamma={:.4}",
        coeffs.p, coeffs.q, coeffs.a0, coeffs.b0, g[0]
    );

    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>10}", "m", "exact", "zeroth", "first", "|gap1|", "bound");
    for m in [1, 2, 5, 10, 20, 50] {
        let exact = exact_average_fidelity(m, &noise, &spam)?;
        let first = first_order_prediction(m, &noise, &spam)?;
        let bound = perturbation_bound(2, &g, m)?;
        println!(
            "{m:>4} {exact:>10.6} {:>10.6} {first:>10.6} {:>10.2e} {bound:>10.2e}",
            coeffs.zeroth_order(m),
            (exact - first).abs()
        );
    }
    Ok(())
}
