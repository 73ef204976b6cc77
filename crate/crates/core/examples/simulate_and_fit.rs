//! Simulate a one-qubit RB experiment under depolarizing noise with SPAM
//! errors and shot noise, then fit both decay models.
//!
//! `cargo run --release --example simulate_and_fit`

use rblab::channels::depolarizing;
use rblab::engine::{exact_average_curve, run_experiment, NoiseModel, RbConfig, SpamSpec};
use rblab::fitting::{compare_models, fit_zeroth};

fn main() -> rblab::Result<()> {
    let noise = NoiseModel::gate_independent(1, depolarizing(0.98, 2)?)?;
    let spam = SpamSpec::depolarized(1, 0.02, 0.03)?;
    let cfg = RbConfig {
        n: 1,
        m_list: vec![1, 2, 4, 8, 16, 32, 64, 128, 256],
        k: 100,
        shots: 1000,
        seed: 11,
    };
    let data = run_experiment(&cfg, &noise, &spam)?;
    let exact = exact_average_curve(&cfg.m_list, &noise, &spam)?;
    for (point, e) in data.mean_curve().iter().zip(&exact) {
        println!("m={:<4} mean={:.4} exact={:.4}", point.m, point.mean, e);
    }

    let zeroth = fit_zeroth(&data)?;
    let params = zeroth.params.expect("curve decays");
    let se = zeroth.std_errors.expect("enough lengths");
    println!("zeroth: p={:.5} ± {:.5}, A={:.4}, B={:.4}", params.p, se.p, params.a, params.b);

    let cmp = compare_models(&data)?;
    println!(
        "first-order p={:?}, D={:?}, gate dependent: {:?}",
        cmp.p_first, cmp.d_hat, cmp.gate_dependent
    );
    Ok(())
}
