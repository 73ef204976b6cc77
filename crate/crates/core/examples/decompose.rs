//! Decompose random Cliffords into H, S, CNOT and Pauli gates and rebuild them.
//!
//! `cargo run --example decompose`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::clifford::{
    decompose, random_clifford, single_qubit_pulse_table, GeneratorSeq, DECOMPOSITION_LENGTH_CONSTANT,
};

fn main() -> rblab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=6 {
        let g = random_clifford(n, &mut rng);
        let seq = decompose(&g);
        assert_eq!(seq.compose(), g);
        let reparsed = GeneratorSeq::parse(n, &seq.to_string())?;
        assert_eq!(reparsed.compose(), g);
        println!(
            "n={n}: {} generators (budget {})",
            seq.generator_count(),
            DECOMPOSITION_LENGTH_CONSTANT * n * n
        );
    }

    let table = single_qubit_pulse_table();
    for (g, word) in table.entries.iter().take(6) {
        println!("{:<24} {:?}", rblab::clifford::encode_element(g), word);
    }
    println!("average pulses per one-qubit Clifford: {}", table.average_length());
    Ok(())
}
