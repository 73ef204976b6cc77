use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rblab::clifford::{
    decode_element, decompose, encode_element, is_symplectic, random_clifford, CliffordElement, GeneratorSeq,
    PauliOp,
};

fn element(n: usize, seed: u64) -> CliffordElement {
    random_clifford(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn pauli(n: usize, seed: u64) -> PauliOp {
    let d2 = 1usize << (2 * n);
    PauliOp::from_basis_index(n, (seed as usize) % d2)
}

proptest! {
    #[test]
    fn composition_is_associative(n in 1usize..=5, a: u64, b: u64, c: u64) {
        let (x, y, z) = (element(n, a), element(n, b), element(n, c));
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_and_identity(n in 1usize..=6, seed: u64) {
        let g = element(n, seed);
        let id = CliffordElement::identity(n);
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(g.inverse().compose(&g).unwrap().is_identity());
        prop_assert_eq!(g.compose(&id).unwrap(), g.clone());
        prop_assert_eq!(id.compose(&g).unwrap(), g);
    }

    #[test]
    fn samples_are_symplectic(n in 1usize..=12, seed: u64) {
        let g = element(n, seed);
        prop_assert!(is_symplectic(g.matrix(), n).unwrap());
    }

    #[test]
    fn conjugation_preserves_commutation(n in 1usize..=4, seed: u64, i: u64, j: u64) {
        let g = element(n, seed);
        let (p, q) = (pauli(n, i), pauli(n, j));
        let (gp, gq) = (g.conjugate_pauli(&p).unwrap(), g.conjugate_pauli(&q).unwrap());
        prop_assert_eq!(p.anticommutes(&q), gp.anticommutes(&gq));
        prop_assert!(gp.is_hermitian());
    }

    #[test]
    fn conjugation_is_a_homomorphism(n in 1usize..=4, a: u64, b: u64, i: u64) {
        let (x, y) = (element(n, a), element(n, b));
        let p = pauli(n, i);
        // compose(x, y) applies y first.
        let direct = x.compose(&y).unwrap().conjugate_pauli(&p).unwrap();
        let staged = x.conjugate_pauli(&y.conjugate_pauli(&p).unwrap()).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn decomposition_round_trips(n in 1usize..=4, seed: u64) {
        let g = element(n, seed);
        let seq = decompose(&g);
        prop_assert_eq!(seq.compose(), g.clone());
        let parsed = GeneratorSeq::parse(n, &seq.to_string()).unwrap();
        prop_assert_eq!(parsed.compose(), g);
    }

    #[test]
    fn encoding_round_trips(n in 1usize..=16, seed: u64) {
        let g = element(n, seed);
        prop_assert_eq!(decode_element(n, &encode_element(&g)).unwrap(), g);
    }
}

#[test]
fn sampling_at_64_qubits_completes() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for _ in 0..5 {
        let g = random_clifford(64, &mut rng);
        assert!(is_symplectic(g.matrix(), 64).unwrap());
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }
}

#[test]
fn sampling_is_seed_deterministic() {
    let a: Vec<String> = (0..10).map(|s| encode_element(&element(3, s))).collect();
    let b: Vec<String> = (0..10).map(|s| encode_element(&element(3, s))).collect();
    assert_eq!(a, b);
}

#[test]
fn malformed_encodings_are_rejected() {
    assert!(decode_element(1, "").is_err());
    assert!(decode_element(1, "zz 0").is_err());
    // A non-symplectic matrix (all ones) must not decode.
    assert!(decode_element(1, "f 0").is_err());
}
