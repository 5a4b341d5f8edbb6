//! Independent checks: self-orthogonality, MDS by minors and by codeword
//! enumeration, the exponent-condition dimension oracles, and the map to
//! quantum parameters.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{first_nonzero_gram_entry, GeneratorMatrix};
use crate::error::{Error, Result};
use crate::field::{Elt, Field};

pub const DEFAULT_MINOR_BUDGET: u128 = 2_000_000;
pub const DEFAULT_ENUM_BUDGET: u128 = 20_000_000;

/// An exponent condition `(n, c)`: the Gram entry at `(t1, t2)` vanishes
/// when `n ∤ c + t1 + q·t2`.
pub type ConditionTerm = (u64, u64);

pub fn check_self_orthogonal(field: &Field, matrix: &GeneratorMatrix) -> bool {
    first_nonzero_gram_entry(field, matrix).is_none()
}

/// C(n, k), saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MdsVerdict {
    Mds,
    /// Columns of a singular `k x k` submatrix.
    NotMds { witness: Vec<usize> },
}

/// Determinant test by Gaussian elimination.
fn is_nonsingular(field: &Field, mut m: Vec<Vec<Elt>>) -> bool {
    let k = m.len();
    for col in 0..k {
        let Some(pivot) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(col, pivot);
        let inv = field.inv(m[col][col]).expect("nonzero pivot");
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = field.neg(field.mul(m[r][col], inv));
            for c in col..k {
                let delta = field.mul(factor, m[col][c]);
                m[r][c] = field.add(m[r][c], delta);
            }
        }
    }
    true
}

/// MDS iff every `k` columns are independent; all `C(n, k)` minors are
/// tested, so the count must fit in `budget`.
pub fn check_mds_rank(field: &Field, matrix: &GeneratorMatrix, budget: u128) -> Result<MdsVerdict> {
    let (k, n) = (matrix.k(), matrix.n());
    let needed = binomial(n, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let columns: Vec<Vec<Elt>> = (0..n).map(|j| matrix.column(j)).collect();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let sub = (0..k).map(|r| pick.iter().map(|&j| columns[j][r]).collect()).collect();
        if !is_nonsingular(field, sub) {
            return Ok(MdsVerdict::NotMds { witness: pick });
        }
        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
            return Ok(MdsVerdict::Mds);
        };
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

/// Minimum Hamming weight over all nonzero codewords, by enumerating every
/// message; `(q^2)^k` must fit in `budget`.
pub fn check_mds_enumeration(field: &Field, matrix: &GeneratorMatrix, budget: u128) -> Result<usize> {
    let k = matrix.k();
    let needed = (field.q2() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let scalars: Vec<Elt> = std::iter::once(Elt::ZERO)
        .chain((0..field.order()).map(|e| field.pow_theta(e as i128)))
        .collect();
    let mut best = usize::MAX;
    let start = vec![Elt::ZERO; matrix.n()];
    enumerate(field, matrix.rows(), &scalars, 0, &start, false, &mut best);
    Ok(best)
}

fn enumerate(
    field: &Field,
    rows: &[Vec<Elt>],
    scalars: &[Elt],
    depth: usize,
    partial: &[Elt],
    nonzero: bool,
    best: &mut usize,
) {
    if depth == rows.len() {
        if nonzero {
            *best = (*best).min(partial.iter().filter(|e| !e.is_zero()).count());
        }
        return;
    }
    for &c in scalars {
        if c.is_zero() {
            enumerate(field, rows, scalars, depth + 1, partial, nonzero, best);
            continue;
        }
        let next: Vec<Elt> = partial
            .iter()
            .zip(&rows[depth])
            .map(|(&a, &g)| field.add(a, field.mul(c, g)))
            .collect();
        enumerate(field, rows, scalars, depth + 1, &next, true, best);
    }
}

/// Largest `w` such that no term `(n, c)` has `n | c + t1 + q·t2` for
/// `0 <= t1, t2 < w`. Grows `w` one step at a time, checking only the new
/// border pairs with `max(t1, t2) = w`.
pub fn max_dim_oracle(q: u64, terms: &[ConditionTerm]) -> usize {
    let mut k: u64 = 0;
    loop {
        for &(n, c) in terms {
            // t2 = k, t1 = 0..=k
            let mut v = ((c as u128 + q as u128 * k as u128) % n as u128) as u64;
            for _ in 0..=k {
                if v == 0 {
                    return k as usize;
                }
                v += 1;
                if v == n {
                    v = 0;
                }
            }
            // t1 = k, t2 = 0..k
            let step = q % n;
            let mut v = (c + k) % n;
            for _ in 0..k {
                if v == 0 {
                    return k as usize;
                }
                v += step;
                if v >= n {
                    v -= n;
                }
            }
        }
        k += 1;
    }
}

/// Same quantity as [`max_dim_oracle`]: for each `t2` the smallest
/// offending `t1` is `(-c - q·t2) mod n`, and the answer is the least
/// `max(t1, t2)` over those pairs.
pub fn max_dim_fast(q: u64, terms: &[ConditionTerm]) -> usize {
    let mut best = u64::MAX;
    for &(n, c) in terms {
        let step = q % n;
        // r(t2) = (-c - q t2) mod n
        let mut r = (n - c % n) % n;
        let mut t2 = 0u64;
        while t2 < best && t2 < n {
            best = best.min(t2.max(r));
            r = (r + n - step) % n;
            t2 += 1;
        }
    }
    best as usize
}

/// Parameters `[[n, n - 2k, k + 1]]_q` of the quantum code obtained from a
/// Hermitian self-orthogonal `[n, k]` MDS code over GF(q^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub n: u64,
    pub k_q: u64,
    pub d: u64,
    pub q: u64,
    pub singleton_ok: bool,
}

impl QuantumParams {
    pub fn triple(&self) -> [u64; 3] {
        [self.n, self.k_q, self.d]
    }
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]_{}", self.n, self.k_q, self.d, self.q)
    }
}

pub fn quantum_params(n: u64, k: u64, q: u64) -> Result<QuantumParams> {
    if n < 2 * k {
        return Err(Error::InvalidDims { n, k });
    }
    let (k_q, d) = (n - 2 * k, k + 1);
    Ok(QuantumParams {
        n,
        k_q,
        d,
        q,
        singleton_ok: k_q + 2 * d == n + 2,
    })
}
