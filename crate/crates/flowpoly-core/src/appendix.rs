//! Shipped coefficient table for Φ of G(119,7).
//!
//! The data file lists `i a_i` for i = 0..117 and
//! Φ(Q) = (Q−1)(Q−2)(Q−3) Σ (−1)^{i+1} a_i Q^i.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

const TABLE: &str = include_str!("../data/g119_7.txt");

/// Degree of the cofactor-free part.
pub const P_DEGREE: usize = 117;

/// Parses a table in the shipped `index value` line format.
pub fn parse_table(text: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let bad = || Error::Parse(format!("coefficient table line {}: {line:?}", line_no + 1));
        let i: usize = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let a: BigInt = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        if i != out.len() || it.next().is_some() {
            return Err(bad());
        }
        out.push(a);
    }
    Ok(out)
}

/// The unsigned a_i, index 0..=117.
pub fn coefficients() -> Vec<BigInt> {
    let a = parse_table(TABLE).expect("shipped table is well formed");
    assert_eq!(a.len(), P_DEGREE + 1);
    a
}

/// P_117(Q) = Σ (−1)^{i+1} a_i Q^i.
pub fn p117() -> IntPoly {
    let c = coefficients()
        .into_iter()
        .enumerate()
        .map(|(i, a)| if i % 2 == 0 { -a } else { a })
        .collect();
    IntPoly::from_coeffs(c)
}

/// (Q−1)(Q−2)(Q−3).
pub fn cofactor() -> IntPoly {
    IntPoly::from_roots(&[1, 2, 3])
}

/// The full degree-120 flow polynomial.
pub fn flow_g119_7() -> IntPoly {
    &cofactor() * &p117()
}
