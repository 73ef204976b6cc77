//! Text encoding of Clifford elements: `<C hex> <h hex>`.
//!
//! `C` is serialized row-major (`4n²` bits), `h` in index order (`2n` bits).
//! Bits are packed most-significant-first into hex digits, and the final digit
//! is zero-padded on the right.

use super::CliffordElement;
use crate::error::{RbError, Result};
use crate::gf2::{BitMatrix, BitVec};

fn bits_to_hex(bits: impl Iterator<Item = bool>) -> String {
    let bits: Vec<bool> = bits.collect();
    bits.chunks(4)
        .map(|chunk| {
            let v = chunk
                .iter()
                .chain(std::iter::repeat(&false))
                .take(4)
                .fold(0u32, |acc, &b| (acc << 1) | b as u32);
            char::from_digit(v, 16).expect("nibble")
        })
        .collect()
}

fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<bool>> {
    let expected = len.div_ceil(4);
    if hex.len() != expected {
        return Err(RbError::Parse(format!(
            "expected {expected} hex digits, got {}",
            hex.len()
        )));
    }
    let mut bits = Vec::with_capacity(expected * 4);
    for ch in hex.chars() {
        let v = ch
            .to_digit(16)
            .ok_or_else(|| RbError::Parse(format!("invalid hex digit {ch:?}")))?;
        for shift in (0..4).rev() {
            bits.push((v >> shift) & 1 == 1);
        }
    }
    if bits[len..].iter().any(|&b| b) {
        return Err(RbError::Parse("nonzero padding bits".into()));
    }
    bits.truncate(len);
    Ok(bits)
}

pub fn encode_element(g: &CliffordElement) -> String {
    let dim = 2 * g.num_qubits();
    let c = g.matrix();
    let c_hex = bits_to_hex((0..dim * dim).map(|k| c.get(k / dim, k % dim)));
    let h_hex = bits_to_hex(g.signs().iter());
    format!("{c_hex} {h_hex}")
}

/// Parse one encoded element; the matrix is checked for the symplectic property.
pub fn decode_element(n: usize, line: &str) -> Result<CliffordElement> {
    let mut parts = line.split_whitespace();
    let (Some(c_hex), Some(h_hex), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(RbError::Parse(format!(
            "expected `<C hex> <h hex>`, got {line:?}"
        )));
    };
    let dim = 2 * n;
    let c_bits = hex_to_bits(c_hex, dim * dim)?;
    let h_bits = hex_to_bits(h_hex, dim)?;
    let mut c = BitMatrix::zeros(dim, dim);
    for (k, b) in c_bits.into_iter().enumerate() {
        c.set(k / dim, k % dim, b);
    }
    CliffordElement::new(n, c, BitVec::from_bools(&h_bits))
}
