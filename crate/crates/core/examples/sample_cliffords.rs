//! Uniform Clifford sampling from a single qubit up to 64 qubits.
//!
//! `cargo run --example sample_cliffords`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::clifford::{decode_element, encode_element, is_symplectic, random_clifford, CliffordGroup};

fn main() -> rblab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    for n in [1, 2, 8, 64] {
        let g = random_clifford(n, &mut rng);
        assert!(is_symplectic(g.matrix(), n)?);
        let line = encode_element(&g);
        assert_eq!(decode_element(n, &line)?, g);
        let shown = if line.len() > 60 { format!("{}...", &line[..60]) } else { line };
        println!("n={n:<3} {shown}");
    }

    // Empirical frequencies over the 24 one-qubit classes.
    let group = CliffordGroup::enumerate(1)?;
    let draws = 24_000;
    let mut counts = vec![0usize; group.len()];
    for _ in 0..draws {
        let g = random_clifford(1, &mut rng);
        counts[group.index_of(&g).expect("every sample is in the group")] += 1;
    }
    let expected = draws as f64 / group.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    println!("one-qubit chi-square over 24 classes: {chi2:.2} (23 dof)");
    Ok(())
}
