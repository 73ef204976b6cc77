//! Sequences per length for a Hoeffding guarantee, checked against repeated
//! simulated experiments.
//!
//! `cargo run --release --example hoeffding_plan`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::engine::{
    exact_average_fidelity, hoeffding_k, run_experiment, Axis, NoiseModel, RbConfig, SpamSpec,
};

fn main() -> rblab::Result<()> {
    let plan = hoeffding_k(1e-3, 0.05, 0.8, 1.0)?;
    println!("epsilon=1e-3 delta=0.05 range=0.2: k={}", plan.k);

    let (eps, delta) = (0.05, 0.05);
    let plan = hoeffding_k(eps, delta, 0.0, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = NoiseModel::random_over_rotation(1, 0.6, Axis::Z, &mut rng)?;
    let spam = SpamSpec::ideal(1);
    let m = 10;
    let truth = exact_average_fidelity(m, &noise, &spam)?;
    let reps = 50;
    let misses = (0..reps)
        .filter(|&seed| {
            let cfg = RbConfig {
                n: 1,
                m_list: vec![m],
                k: plan.k as usize,
                shots: 0,
                seed,
            };
            let data = run_experiment(&cfg, &noise, &spam).expect("valid config");
            (data.mean_curve()[0].mean - truth).abs() > eps
        })
        .count();
    println!(
        "k={} for epsilon={eps}: {misses}/{reps} estimates missed the exact mean {truth:.5}",
        plan.k
    );
    Ok(())
}
