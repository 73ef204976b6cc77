use rand::Rng;

use super::CliffordElement;
use crate::gf2::{BitMatrix, BitVec};

/// `Ω u`: swaps the x and z halves so that `(Ω u) · v = uᵀ Ω v`.
fn omega_times(u: &BitVec, n: usize) -> BitVec {
    let mut out = BitVec::zeros(2 * n);
    for i in 0..n {
        out.set(i, u.get(n + i));
        out.set(n + i, u.get(i));
    }
    out
}

/// Uniformly random `2n × 2n` symplectic matrix.
///
/// Columns are fixed in the order `X_0, Z_0, X_1, Z_1, …`. Each new column is a
/// uniformly random solution of the linear system prescribing its symplectic
/// products with every column already chosen (and, for an X-image, rejecting
/// the zero vector). The number of admissible choices at each step does not
/// depend on earlier choices, so the product distribution is uniform over the
/// group. Each solve is `O(n^3)`, giving `O(n^4)` per matrix.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
    assert!(n >= 1, "need at least one qubit");
    let dim = 2 * n;
    let mut fixed: Vec<BitVec> = Vec::with_capacity(dim);
    let mut c = BitMatrix::zeros(dim, dim);

    for k in 0..n {
        // X_k image: orthogonal to everything chosen so far, nonzero.
        let mut rows: Vec<BitVec> = fixed.iter().map(|u| omega_times(u, n)).collect();
        let system = matrix_from_rows(&rows, dim);
        let rhs = BitVec::zeros(rows.len());
        let v = loop {
            let v = system
                .solve_random(&rhs, rng)
                .expect("homogeneous systems are consistent");
            if !v.is_zero() {
                break v;
            }
        };

        // Z_k image: orthogonal to earlier pairs, product 1 with v.
        rows.push(omega_times(&v, n));
        let system = matrix_from_rows(&rows, dim);
        let mut rhs = BitVec::zeros(rows.len());
        rhs.set(rows.len() - 1, true);
        let w = system
            .solve_random(&rhs, rng)
            .expect("v is nonzero and independent of earlier columns");

        c.set_column(k, &v);
        c.set_column(n + k, &w);
        fixed.push(v);
        fixed.push(w);
    }
    c
}

fn matrix_from_rows(rows: &[BitVec], cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for j in 0..cols {
            if r.get(j) {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// Uniformly random n-qubit Clifford element: uniform symplectic part and
/// independent fair sign bits.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordElement {
    let c = random_symplectic(n, rng);
    let h = BitVec::random(2 * n, rng);
    CliffordElement::from_parts_unchecked(n, c, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::is_symplectic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_symplectic_for_small_and_moderate_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=8 {
            for _ in 0..20 {
                let g = random_clifford(n, &mut rng);
                assert!(is_symplectic(g.matrix(), n).unwrap());
            }
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = random_clifford(3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_clifford(3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }
}
