//! Smith normal form over the integers, with the column transform kept so
//! that element orders in the cokernel can be read off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentation::IntegerMatrix;

/// `U·M·V = diag(d_1, d_2, …)` with `d_1 | d_2 | …`, all `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal entries, one per column; columns past the row count are 0.
    factors: Vec<BigInt>,
    /// The unimodular column transform `V`.
    transform: IntegerMatrix,
}

impl SmithForm {
    /// Invariant factors `d_1 | d_2 | … | d_cols`, zeros last.
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Invariant factors other than 1: the cokernel is the direct sum of
    /// `Z/d` over these, with `Z/0 = Z`.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    /// True when the cokernel is cyclic of order `m` (`m = 0` meaning `Z`).
    pub fn is_cyclic_of_order(&self, m: &BigInt) -> bool {
        let inv = self.invariants();
        if m.is_one() {
            inv.is_empty()
        } else {
            inv.len() == 1 && &inv[0] == m
        }
    }

    pub fn transform(&self) -> &IntegerMatrix {
        &self.transform
    }

    /// Order of the class of `v` (a row vector of length `cols`) in the
    /// cokernel; 0 means infinite.
    pub fn order_of(&self, v: &[BigInt]) -> BigInt {
        assert_eq!(v.len(), self.factors.len(), "vector length does not match column count");
        let n = v.len();
        let mut order = BigInt::one();
        for j in 0..n {
            let mut coord = BigInt::zero();
            for (i, vi) in v.iter().enumerate() {
                coord += vi * &self.transform[(i, j)];
            }
            if coord.is_zero() {
                continue;
            }
            let d = &self.factors[j];
            if d.is_zero() {
                return BigInt::zero();
            }
            let part = d / d.gcd(&coord);
            order = order.lcm(&part);
        }
        order
    }
}

fn smallest_nonzero(m: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= m[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Exact Smith normal form by repeated pivoting on the smallest entry.
pub fn smith_normal_form(input: &IntegerMatrix) -> SmithForm {
    let mut m = input.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut v = IntegerMatrix::zeros(cols, cols);
    for i in 0..cols {
        v[(i, i)] = BigInt::one();
    }
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&m, t) else { break };
        m.swap_rows(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = -m[(i, t)].div_floor(&m[(t, t)]);
                m.add_row_multiple(i, t, &q);
                if !m[(i, t)].is_zero() {
                    m.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = -m[(t, j)].div_floor(&m[(t, t)]);
                m.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !m[(t, j)].is_zero() {
                    m.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Row and column t are clear; enforce divisibility on the rest.
            let pivot = m[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => m.add_row_multiple(t, i, &BigInt::one()),
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..cols)
        .map(|j| if j < rows { m[(j, j)].clone() } else { BigInt::zero() })
        .collect();
    SmithForm { factors, transform: v }
}
