//! Diamond distances between Pauli channels, with SDP certificates, and the
//! chain ΔF ≤ ‖·‖₁→₁ᴴ ≤ ‖·‖◇.
//!
//! `cargo run --example diamond`

use rblab::channels::{error_rate, PauliChannel};
use rblab::metrics::{delta_f, diamond_from_r, min_fidelity_bound, one_one_h_norm, pauli_diamond_distance};

fn main() -> rblab::Result<()> {
    let id = PauliChannel::identity(1);
    for p in [0.99, 0.98, 0.9] {
        let dep = PauliChannel::depolarizing(1, p)?;
        let dist = pauli_diamond_distance(&dep, &id)?;
        let r = error_rate(&dep.to_superoperator())?;
        let (a, b) = (dep.to_superoperator(), id.to_superoperator());
        println!(
            "p={p}: diamond={:.6} from r={:.6} certificates=({:.6}, {:.6}) tight={}",
            dist.distance,
            diamond_from_r(r, 2)?,
            dist.certificates.primal,
            dist.certificates.dual,
            dist.certificates.is_tight(1e-10)
        );
        println!(
            "        dF={:.6} <= 1->1H={:.6} <= diamond; min-fidelity bound {:.4}",
            delta_f(&a, &b)?,
            one_one_h_norm(&a.sub(&b)?)?,
            min_fidelity_bound(&dep, &id)?.value
        );
    }

    let dephase = PauliChannel::new(1, vec![0.9, 0.0, 0.0, 0.1])?;
    let flip = PauliChannel::new(1, vec![0.9, 0.1, 0.0, 0.0])?;
    println!(
        "dephasing vs bit flip: {:.3}",
        pauli_diamond_distance(&dephase, &flip)?.distance
    );
    Ok(())
}
