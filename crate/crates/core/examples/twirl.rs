//! Twirling amplitude damping over the Clifford group gives a depolarizing
//! channel with the same average fidelity.
//!
//! `cargo run --example twirl`

use rblab::channels::{amplitude_damping, average_fidelity, depolarizing, twirl_exact};
use rblab::clifford::CliffordGroup;

fn main() -> rblab::Result<()> {
    let group = CliffordGroup::enumerate(1)?;
    for gamma in [0.01, 0.1, 0.5] {
        let ad = amplitude_damping(gamma)?;
        let twirled = twirl_exact(&ad, group.elements())?;
        let p = ad.depolarizing_parameter();
        let target = depolarizing(p, 2)?;
        println!(
            "gamma={gamma:<5} p={p:.6} F={:.6} max|twirl - depol|={:.1e}",
            average_fidelity(&ad)?,
            twirled.max_abs_diff(&target)
        );
    }
    Ok(())
}
