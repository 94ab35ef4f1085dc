//! Closed-form thresholds: the clasp count of a Montesinos knot and the
//! Alexander polynomial of `C[2p, 2q]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThresholdError {
    #[error("tangle list is empty")]
    NoTangles,
    #[error("tangle {0} has no entries")]
    EmptyTangle(usize),
    #[error("tangle {tangle} has a zero entry at position {position}; only the last entry may be 0")]
    ZeroEntry { tangle: usize, position: usize },
    #[error("C[2p,2q] needs p > 0 and q != 0, got p = {p}, q = {q}")]
    Genus1Parameters { p: i64, q: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontesinosReport {
    /// Clasp count: `Σ_{i<m} Σ |a_{i,even}| + Σ |a_{m,odd}|`.
    pub c: i64,
    /// The same sum without absolute values on the first `m−1` tangles.
    pub literal: i64,
    pub condition_star: bool,
    pub threshold: String,
}

/// Entries at 1-based odd positions, then at even positions.
fn split_positions(seq: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let odd = seq.iter().step_by(2).copied().collect();
    let even = seq.iter().skip(1).step_by(2).copied().collect();
    (odd, even)
}

/// `c(K)` for `M(R_1, …, R_m)` with `R_i = [a_{i,1}, …, a_{i,n_i}]`, and
/// whether Condition (*) holds: `R_1..R_{m−1}` odd type with all entries
/// even and even-position entries negative; `R_m` even type with
/// odd-position entries positive even and even-position entries odd, or
/// odd-position entries negative even and even-position entries even.
pub fn montesinos_c(tangles: &[Vec<i64>]) -> Result<MontesinosReport, ThresholdError> {
    if tangles.is_empty() {
        return Err(ThresholdError::NoTangles);
    }
    for (i, t) in tangles.iter().enumerate() {
        if t.is_empty() {
            return Err(ThresholdError::EmptyTangle(i));
        }
        if let Some(pos) = t[..t.len() - 1].iter().position(|&a| a == 0) {
            return Err(ThresholdError::ZeroEntry { tangle: i, position: pos });
        }
    }
    let (last, rest) = tangles.split_last().expect("non-empty");
    let even = |a: i64| a % 2 == 0;
    let rest_ok = rest.iter().all(|t| {
        let (_, evens) = split_positions(t);
        t.len() % 2 == 1 && t.iter().all(|&a| even(a)) && evens.iter().all(|&a| a < 0)
    });
    let (last_odd, last_even) = split_positions(last);
    let last_ok = last.len() % 2 == 0
        && (last_odd.iter().all(|&a| a > 0 && even(a)) && last_even.iter().all(|&a| !even(a))
            || last_odd.iter().all(|&a| a < 0 && even(a)) && last_even.iter().all(|&a| even(a)));
    let tail: i64 = last_odd.iter().map(|a| a.abs()).sum();
    let c = rest.iter().map(|t| split_positions(t).1.iter().map(|a| a.abs()).sum::<i64>()).sum::<i64>() + tail;
    let literal = rest.iter().map(|t| split_positions(t).1.iter().sum::<i64>()).sum::<i64>() + tail;
    Ok(MontesinosReport { c, literal, condition_star: rest_ok && last_ok, threshold: format!("generalized torsion for r >= {c}") })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootShape {
    /// Two distinct positive real roots.
    PositiveReal,
    /// A non-real conjugate pair.
    Complex,
    /// A repeated real root.
    Repeated,
    /// Real roots, not both positive.
    OtherReal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderReport {
    /// Coefficients of `t`, `1`, `t⁻¹`.
    pub coefficients: (i64, i64, i64),
    /// Of `a t² + b t + c` with `(a, b, c)` the coefficients.
    pub discriminant: i64,
    pub roots: RootShape,
}

/// `Δ(t) = −pq·t + (2pq − 1) − pq·t⁻¹`, with the shape of its roots read
/// from the discriminant `1 − 4pq`.
pub fn alexander_genus1(p: i64, q: i64) -> Result<AlexanderReport, ThresholdError> {
    if p <= 0 || q == 0 {
        return Err(ThresholdError::Genus1Parameters { p, q });
    }
    let pq = p * q;
    let (a, b, c) = (-pq, 2 * pq - 1, -pq);
    let discriminant = b * b - 4 * a * c;
    let roots = match discriminant {
        d if d < 0 => RootShape::Complex,
        0 => RootShape::Repeated,
        // product c/a = 1 > 0; positive iff the sum −b/a is positive
        _ if -b * a.signum() > 0 => RootShape::PositiveReal,
        _ => RootShape::OtherReal,
    };
    Ok(AlexanderReport { coefficients: (a, b, c), discriminant, roots })
}
