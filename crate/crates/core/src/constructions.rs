//! Factories mapping named parameters to verified codes or, beyond matrix
//! capacity, to certificates backed by the exponent conditions alone.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{eval_code, extend_c1, first_nonzero_gram_entry, CodeArtifact};
use crate::error::{Error, Result};
use crate::eval_sets::{
    find_h, multiplicity_counts, parity_union_char2, parity_union_size, subgroup_set,
    union_size, weighted_union, WeightRule,
};
use crate::field::{Elt, Field, TABLE_MAX_ORDER};
use crate::numtheory::{gcd, lcm, prime_power};
use crate::verifier::{
    binomial, check_mds_enumeration, check_mds_rank, max_dim_fast, max_dim_oracle,
    quantum_params, ConditionTerm, MdsVerdict, QuantumParams, DEFAULT_ENUM_BUDGET,
    DEFAULT_MINOR_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Subgroup of odd index `m | q+1`, unit weights, rows `u^{1+t}`.
    #[serde(alias = "c1")]
    #[value(alias = "c1")]
    Subgroup,
    /// The subgroup code with an extra coordinate at zero.
    #[serde(alias = "c1-ext")]
    #[value(alias = "c1-ext")]
    BorderedSubgroup,
    /// Characteristic 2: points in an odd number of subgroups of coprime odd
    /// indices dividing `q+1`.
    #[serde(alias = "c2-char2")]
    #[value(alias = "c2-char2")]
    ParityUnion,
    /// Odd characteristic: union of two subgroups of coprime odd index
    /// dividing `q+1`, shared points weighted 2.
    #[serde(alias = "union-odd")]
    #[value(alias = "union-odd")]
    OddUnion,
    /// Subgroup of even index `m | q-1`, weights `u^{(q+1)/2}`, rows `u^t`.
    #[serde(alias = "thm31")]
    #[value(alias = "thm31")]
    HalfNorm,
    /// Two even indices with `lcm = q-1`, weights summed at shared points.
    #[serde(alias = "thm32")]
    #[value(alias = "thm32")]
    HalfNormPair,
    /// Any number of even indices dividing `q-1`.
    #[serde(alias = "thm33")]
    #[value(alias = "thm33")]
    HalfNormUnion,
    /// Odd index `m_odd | q+1` weighted `u^{q+1}` together with even index
    /// `m_even | q-1` weighted `H·u^{(q+1)/2}`.
    #[serde(alias = "thm41")]
    #[value(alias = "thm41")]
    MixedUnion,
}

use Construction::*;

fn violated(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

impl Construction {
    pub const ALL: [Construction; 8] = [
        Subgroup,
        BorderedSubgroup,
        ParityUnion,
        OddUnion,
        HalfNorm,
        HalfNormPair,
        HalfNormUnion,
        MixedUnion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subgroup => "subgroup",
            BorderedSubgroup => "bordered-subgroup",
            ParityUnion => "parity-union",
            OddUnion => "odd-union",
            HalfNorm => "half-norm",
            HalfNormPair => "half-norm-pair",
            HalfNormUnion => "half-norm-union",
            MixedUnion => "mixed-union",
        }
    }

    /// Allowed number of divisors.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Subgroup | BorderedSubgroup | HalfNorm => (1, 1),
            OddUnion | HalfNormPair | MixedUnion => (2, 2),
            ParityUnion | HalfNormUnion => (2, 8),
        }
    }

    /// Row `t` evaluates `u^{shift+t}`; for the bordered code the shift
    /// refers to the subgroup part, rows starting at `u^0`.
    pub fn shift(self) -> u64 {
        match self {
            Subgroup | ParityUnion | OddUnion => 1,
            BorderedSubgroup | HalfNorm | HalfNormPair | HalfNormUnion | MixedUnion => 0,
        }
    }

    /// Checks every divisibility hypothesis; returns `(p, h)` for `q`.
    pub fn validate(self, q: u64, ds: &[u64]) -> Result<(u64, u32)> {
        let (p, h) = prime_power(q).ok_or_else(|| violated(format!("q = {q} is not a prime power")))?;
        if q >= 1 << 32 {
            return Err(Error::Overflow);
        }
        let (lo, hi) = self.arity();
        if ds.len() < lo || ds.len() > hi {
            return Err(violated(format!(
                "{} takes {lo}..={hi} divisors, got {}",
                self.name(),
                ds.len()
            )));
        }
        let odd_of = |m: u64, what: u64| -> Result<()> {
            if m == 0 || m % 2 == 0 || what % m != 0 {
                return Err(violated(format!("{m} is not an odd divisor of {what}")));
            }
            Ok(())
        };
        let even_of = |m: u64, what: u64| -> Result<()> {
            if m == 0 || m % 2 == 1 || what % m != 0 {
                return Err(violated(format!("{m} is not an even divisor of {what}")));
            }
            Ok(())
        };
        let need_odd_char = || -> Result<()> {
            if p == 2 {
                Err(violated("odd characteristic required"))
            } else {
                Ok(())
            }
        };
        let distinct = || -> Result<()> {
            let mut sorted = ds.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != ds.len() {
                return Err(violated("divisors must be distinct"));
            }
            Ok(())
        };
        let coprime = || -> Result<()> {
            for (i, &a) in ds.iter().enumerate() {
                for &b in &ds[i + 1..] {
                    if gcd(a, b) != 1 {
                        return Err(Error::NotCoprime(a, b));
                    }
                }
            }
            Ok(())
        };
        match self {
            Subgroup | BorderedSubgroup => odd_of(ds[0], q + 1)?,
            ParityUnion => {
                if p != 2 {
                    return Err(Error::NotChar2);
                }
                for &m in ds {
                    odd_of(m, q + 1)?;
                    if m < 3 {
                        return Err(violated("parity union needs divisors >= 3"));
                    }
                }
                coprime()?;
            }
            OddUnion => {
                need_odd_char()?;
                for &m in ds {
                    odd_of(m, q + 1)?;
                }
                if !(3 <= ds[0] && ds[0] < ds[1]) {
                    return Err(violated("need 3 <= m1 < m2"));
                }
                coprime()?;
            }
            HalfNorm | HalfNormPair | HalfNormUnion => {
                need_odd_char()?;
                for &m in ds {
                    even_of(m, q - 1)?;
                    if m < 6 {
                        return Err(violated(format!("even divisor {m} must be at least 6")));
                    }
                }
                distinct()?;
                if self == HalfNormPair && ds.iter().fold(1, |a, &b| lcm(a, b)) != q - 1 {
                    return Err(violated("lcm of the two divisors must equal q-1"));
                }
                if self == HalfNormUnion {
                    // a point in t subgroups carries weight t·u^{(q+1)/2}
                    let counts = multiplicity_counts(q * q - 1, ds);
                    if let Some(t) = (1..counts.len()).find(|&t| counts[t] > 0 && t as u64 % p == 0) {
                        return Err(Error::WeightSumVanishes(t as u64));
                    }
                }
            }
            MixedUnion => {
                need_odd_char()?;
                odd_of(ds[0], q + 1)?;
                even_of(ds[1], q - 1)?;
                // The shared points give (q-1)/gcd(q-1, m_odd·m_even/2)
                // forbidden values of H; all of GF(q)* when m_even = 2.
                if (q - 1) / gcd(q - 1, ds[0] * (ds[1] / 2)) == q - 1 {
                    return Err(Error::NoValidH);
                }
            }
        }
        Ok((p, h))
    }

    /// Exponent conditions `(n_i, c_i)` whose joint avoidance makes the Gram
    /// matrix vanish. The bordered code shares the plain subgroup's terms.
    pub fn condition_terms(self, q: u64, ds: &[u64]) -> Result<Vec<ConditionTerm>> {
        self.validate(q, ds)?;
        let order = q * q - 1;
        let half = (q + 1) / 2;
        Ok(match self {
            Subgroup | BorderedSubgroup | ParityUnion | OddUnion => {
                ds.iter().map(|&m| (order / m, q + 1)).collect()
            }
            HalfNorm | HalfNormPair | HalfNormUnion => ds.iter().map(|&m| (order / m, half)).collect(),
            MixedUnion => vec![(order / ds[0], q + 1), (order / ds[1], half)],
        })
    }

    pub fn length(self, q: u64, ds: &[u64]) -> Result<u64> {
        self.validate(q, ds)?;
        let order = q * q - 1;
        Ok(match self {
            Subgroup | HalfNorm => order / ds[0],
            BorderedSubgroup => order / ds[0] + 1,
            ParityUnion => parity_union_size(order, ds),
            OddUnion | HalfNormPair | HalfNormUnion | MixedUnion => union_size(order, ds),
        })
    }

    /// Largest admissible dimension from the exponent conditions.
    pub fn oracle_max_k(self, q: u64, ds: &[u64]) -> Result<usize> {
        let terms = self.condition_terms(q, ds)?;
        let k = max_dim_oracle(q, &terms);
        Ok(if self == BorderedSubgroup { k + 1 } else { k })
    }

    /// The same bound computed by the closed-form scan over `t2`.
    pub fn fast_max_k(self, q: u64, ds: &[u64]) -> Result<usize> {
        let terms = self.condition_terms(q, ds)?;
        let k = max_dim_fast(q, &terms);
        Ok(if self == BorderedSubgroup { k + 1 } else { k })
    }

    /// Closed-form dimension bound asserted for the construction.
    pub fn claimed_max_k(self, q: u64, ds: &[u64]) -> Result<u64> {
        self.validate(q, ds)?;
        let floor_bound = |m: u64| (m + 1) * (q - 1) / (2 * m);
        Ok(match self {
            Subgroup => floor_bound(ds[0]),
            BorderedSubgroup => floor_bound(ds[0]) + 1,
            ParityUnion | OddUnion => floor_bound(*ds.iter().max().expect("nonempty")),
            HalfNorm | HalfNormPair | HalfNormUnion => {
                (q - 1) / 2 + ds.iter().map(|&m| (q - 1) / m).min().expect("nonempty")
            }
            MixedUnion => {
                (q - 1) / 2 - 1 + ((q + 1) / (2 * ds[0])).min((q - 1) / ds[1] + 1)
            }
        })
    }

    /// Builds the generator matrix at dimension `k` without consulting the
    /// oracle; the caller decides what to do with a nonzero Gram.
    pub fn build_artifact(self, field: Arc<Field>, ds: &[u64], k: usize) -> Result<CodeArtifact> {
        let q = field.q();
        self.validate(q, ds)?;
        let set = match self {
            Subgroup => subgroup_set(&field, ds[0])?,
            HalfNorm => weighted_union(&field, ds, WeightRule::HALF_NORM)?,
            BorderedSubgroup => return extend_c1(field, ds[0], k),
            ParityUnion => parity_union_char2(&field, ds)?,
            OddUnion => weighted_union(&field, ds, WeightRule::Unit)?,
            HalfNormPair | HalfNormUnion => weighted_union(&field, ds, WeightRule::HALF_NORM)?,
            MixedUnion => {
                let h = find_h(&field, ds[0], ds[1])?;
                weighted_union(&field, ds, WeightRule::Mixed { h })?
            }
        };
        eval_code(field, set, k, self.shift())
    }
}

/// A construction with its parameters and an optional target dimension
/// (the oracle maximum when absent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub construction: Construction,
    pub q: u64,
    pub divisors: Vec<u64>,
    pub k: Option<usize>,
}

impl Request {
    pub fn new(construction: Construction, q: u64, divisors: &[u64], k: Option<usize>) -> Self {
        Self {
            construction,
            q,
            divisors: divisors.to_vec(),
            k,
        }
    }
}

/// Work limits deciding how far verification goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest `q^2` for which matrices are built.
    pub field_size: u64,
    /// Largest `k·n` for which matrices are built.
    pub matrix_entries: u128,
    pub minors: u128,
    pub enumeration: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            field_size: TABLE_MAX_ORDER,
            matrix_entries: 100_000_000,
            minors: DEFAULT_MINOR_BUDGET,
            enumeration: DEFAULT_ENUM_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerifiedLevel {
    /// Matrix built and its Hermitian Gram computed to be zero.
    FullMatrix,
    /// Integer exponent conditions only.
    ConditionOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MdsStatus {
    /// Every `k`-column minor is nonzero.
    Minors,
    /// Minimum weight `n - k + 1` found by enumeration.
    Enumeration,
    #[serde(rename = "UNVERIFIED_MDS")]
    Unverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub q: u64,
    pub p: u64,
    pub h: u32,
    pub divisors: Vec<u64>,
}

/// Result of a construction request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub construction: Construction,
    pub params: Params,
    pub n: u64,
    pub k: usize,
    /// `[n, n - 2k, k + 1]`.
    pub quantum: [u64; 3],
    pub max_k_oracle: usize,
    pub max_k_claimed: u64,
    pub verified_level: VerifiedLevel,
    pub mds: MdsStatus,
    /// The mixed-weight multiplier, when one was needed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_weight: Option<Elt>,
    pub discrepancies: Vec<String>,
}

impl Certificate {
    pub fn quantum_params(&self) -> QuantumParams {
        quantum_params(self.quantum[0], self.k as u64, self.params.q).expect("checked at build")
    }
}

#[derive(Debug, Clone)]
pub struct Built {
    pub certificate: Certificate,
    pub artifact: Option<CodeArtifact>,
}

/// Validates, consults the oracle, and verifies as far as the budget allows.
pub fn build(req: &Request, budget: &Budget) -> Result<Built> {
    let c = req.construction;
    let (q, ds) = (req.q, req.divisors.as_slice());
    let (p, h) = c.validate(q, ds)?;
    let n = c.length(q, ds)?;
    let max_k_oracle = c.oracle_max_k(q, ds)?;
    let max_k_claimed = c.claimed_max_k(q, ds)?;
    let fast = c.fast_max_k(q, ds)?;
    let k = req.k.unwrap_or(max_k_oracle);
    let min_k = if c == BorderedSubgroup { 2 } else { 1 };
    if k < min_k || k as u64 > n {
        return Err(Error::DimensionTooLarge { k, n: n as usize });
    }
    if k > max_k_oracle {
        return Err(Error::DimensionExceedsOracle { k, max: max_k_oracle });
    }
    let quantum = quantum_params(n, k as u64, q)?;

    let mut discrepancies = Vec::new();
    if fast != max_k_oracle {
        discrepancies.push(format!("incremental oracle {max_k_oracle} disagrees with scan {fast}"));
    }
    match (max_k_claimed as usize).cmp(&max_k_oracle) {
        std::cmp::Ordering::Greater => discrepancies.push(format!(
            "closed-form bound k <= {max_k_claimed} exceeds oracle maximum {max_k_oracle}"
        )),
        std::cmp::Ordering::Less => discrepancies.push(format!(
            "closed-form bound k <= {max_k_claimed} is below oracle maximum {max_k_oracle}"
        )),
        std::cmp::Ordering::Equal => {}
    }

    let within = q * q <= budget.field_size && (k as u128) * (n as u128) <= budget.matrix_entries;
    let mut h_weight = None;
    let (artifact, verified_level, mds) = if within {
        let field = Arc::new(Field::new(p, h)?);
        let art = c.build_artifact(field.clone(), ds, k)?;
        debug_assert_eq!(art.n() as u64, n);
        if art.n() as u64 != n {
            return Err(violated(format!("built length {} but formula gives {n}", art.n())));
        }
        if let Some((row, col)) = first_nonzero_gram_entry(&field, &art.matrix) {
            return Err(Error::NotSelfOrthogonal { row, col });
        }
        if c == MixedUnion {
            h_weight = Some(find_h(&field, ds[0], ds[1])?);
        }
        let mds = mds_status(&field, &art, budget)?;
        (Some(art), VerifiedLevel::FullMatrix, mds)
    } else {
        (None, VerifiedLevel::ConditionOnly, MdsStatus::Unverified)
    };
    Ok(Built {
        certificate: Certificate {
            construction: c,
            params: Params {
                q,
                p,
                h,
                divisors: ds.to_vec(),
            },
            n,
            k,
            quantum: quantum.triple(),
            max_k_oracle,
            max_k_claimed,
            verified_level,
            mds,
            h_weight,
            discrepancies,
        },
        artifact,
    })
}

fn mds_status(field: &Field, art: &CodeArtifact, budget: &Budget) -> Result<MdsStatus> {
    let (k, n) = (art.k(), art.n());
    if binomial(n, k) <= budget.minors {
        return match check_mds_rank(field, &art.matrix, budget.minors)? {
            MdsVerdict::Mds => Ok(MdsStatus::Minors),
            MdsVerdict::NotMds { witness } => {
                Err(violated(format!("columns {witness:?} are dependent")))
            }
        };
    }
    let words = (field.q2() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if words <= budget.enumeration {
        let w = check_mds_enumeration(field, &art.matrix, budget.enumeration)?;
        if w != n - k + 1 {
            return Err(violated(format!("minimum weight {w}, expected {}", n - k + 1)));
        }
        return Ok(MdsStatus::Enumeration);
    }
    Ok(MdsStatus::Unverified)
}

/// Parameter generators for the derived families; each returns a request
/// for one of the constructions above.
pub mod families {
    use super::*;

    /// Odd coprime `a < b` with `q = 2ab + 1`: half-norm pair on `2a, 2b`.
    pub fn odd_pair(a: u64, b: u64) -> Request {
        Request::new(HalfNormPair, 2 * a * b + 1, &[2 * a, 2 * b], None)
    }

    /// Odd pairwise-coprime `ms` with `q = 2·Πms + 1`.
    pub fn odd_tuple(ms: &[u64]) -> Request {
        let q = 2 * ms.iter().product::<u64>() + 1;
        let ds: Vec<u64> = ms.iter().map(|m| 2 * m).collect();
        Request::new(HalfNormUnion, q, &ds, None)
    }

    /// Odd `m | q+1` with `m - 1 | q-1`: length `2(q^2-1)/m`.
    pub fn adjacent_pair(q: u64, m: u64) -> Request {
        Request::new(MixedUnion, q, &[m, m.saturating_sub(1)], None)
    }

    /// `q = 1 (mod 4)`: length `4(q-1)`.
    pub fn four_q_minus_one(q: u64) -> Request {
        Request::new(MixedUnion, q, &[(q + 1) / 2, (q - 1) / 2], None)
    }

    /// `2(2j+1) | q-1` and `4j+1 | q+1`: length `(q^2-1)/(2j+1)`.
    pub fn from_index(q: u64, j: u64) -> Request {
        Request::new(MixedUnion, q, &[4 * j + 1, 2 * (2 * j + 1)], None)
    }

    /// Even `m_even | q-1`, odd `m_odd | q+1`, coprime.
    pub fn split_pair(q: u64, m_even: u64, m_odd: u64) -> Request {
        Request::new(MixedUnion, q, &[m_odd, m_even], None)
    }

    /// `q = 16j^2 - 12j + 1` with `m_even = 4j`, `m_odd = 3(4j - 1)`.
    pub fn quadratic(j: u64) -> Request {
        let q = 16 * j * j - 12 * j + 1;
        split_pair(q, 4 * j, 3 * (4 * j - 1))
    }
}
