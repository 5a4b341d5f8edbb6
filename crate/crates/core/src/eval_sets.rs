//! Evaluation points and weights: single subgroups, characteristic-2 parity
//! unions, and weighted unions whose shared points carry summed weights.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::char_sums::{parity_union_exponents, subgroup_order};
use crate::error::{Error, Result};
use crate::field::{exponent_list, Elt, Field};
use crate::numtheory::{gcd, lcm, mul_mod};

/// Distinct nonzero points with weights in GF(q)*, sorted by discrete log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalSet {
    #[serde(with = "exponent_list")]
    pub points: Vec<Elt>,
    #[serde(with = "exponent_list")]
    pub weights: Vec<Elt>,
    /// For each point, the subgroup indices (divisors) containing it.
    pub provenance: Vec<Vec<u64>>,
}

impl EvalSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks distinctness, nonzero points, ascending order and that every
    /// weight is a nonzero element of GF(q).
    pub fn validate(&self, field: &Field) -> Result<()> {
        if self.points.len() != self.weights.len() {
            return Err(Error::LengthMismatch(self.points.len(), self.weights.len()));
        }
        if self.points.iter().any(|p| p.is_zero()) {
            return Err(Error::HypothesisViolated("zero evaluation point".into()));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::HypothesisViolated(
                "points not distinct and ascending".into(),
            ));
        }
        for w in &self.weights {
            if w.is_zero() || !field.in_subfield(*w) {
                return Err(Error::NotInSubfield);
            }
        }
        Ok(())
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        self.provenance.iter().map(Vec::len)
    }
}

/// How each subgroup of a union weights its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    Unit,
    /// Weight `u^{(q+1)·num/den}` at the point `u`.
    SubgroupPower { num: u64, den: u64 },
    /// Two subgroups: the first weights `u^{q+1}`, the second `H·u^{(q+1)/2}`.
    Mixed { h: Elt },
}

impl WeightRule {
    pub const HALF_NORM: WeightRule = WeightRule::SubgroupPower { num: 1, den: 2 };

    fn part_weight(&self, field: &Field, part: usize, point: u64) -> Result<Elt> {
        let q1 = field.q() + 1;
        let order = field.order();
        let power = |num: u64, den: u64| -> Result<Elt> {
            if (q1 * num) % den != 0 {
                return Err(Error::HypothesisViolated(format!(
                    "weight exponent (q+1)·{num}/{den} is not an integer"
                )));
            }
            Ok(field.pow_theta(mul_mod(point, q1 * num / den, order) as i128))
        };
        match *self {
            WeightRule::Unit => Ok(Elt::ONE),
            WeightRule::SubgroupPower { num, den } => power(num, den),
            WeightRule::Mixed { h } => match part {
                0 => power(1, 1),
                1 => Ok(field.mul(h, power(1, 2)?)),
                _ => Err(Error::HypothesisViolated(
                    "mixed weights take exactly two subgroups".into(),
                )),
            },
        }
    }
}

/// The subgroup θ^{jm}, j = 1..(q^2-1)/m, with unit weights.
pub fn subgroup_set(field: &Field, m: u64) -> Result<EvalSet> {
    let n = subgroup_order(field, m)?;
    let points: Vec<Elt> = (0..n).map(|j| field.pow_theta((j * m) as i128)).collect();
    Ok(EvalSet {
        weights: vec![Elt::ONE; points.len()],
        provenance: vec![vec![m]; points.len()],
        points,
    })
}

/// Characteristic-2 union keeping points that lie in an odd number of the
/// subgroups; unit weights.
pub fn parity_union_char2(field: &Field, ms: &[u64]) -> Result<EvalSet> {
    let exps = parity_union_exponents(field, ms)?;
    let provenance = exps
        .iter()
        .map(|&e| ms.iter().copied().filter(|&m| e % m == 0).collect())
        .collect();
    Ok(EvalSet {
        weights: vec![Elt::ONE; exps.len()],
        points: exps.into_iter().map(|e| field.pow_theta(e as i128)).collect(),
        provenance,
    })
}

/// Full union of the subgroups of index `ms[i]`. A point's weight is the sum
/// of the weights given by every subgroup containing it.
pub fn weighted_union(field: &Field, ms: &[u64], rule: WeightRule) -> Result<EvalSet> {
    for &m in ms {
        subgroup_order(field, m)?;
    }
    let mut exps: Vec<u64> = Vec::new();
    for (i, &m) in ms.iter().enumerate() {
        for e in (0..field.order()).step_by(m as usize) {
            if !ms[..i].iter().any(|&prev| e % prev == 0) {
                exps.push(e);
            }
        }
    }
    exps.sort_unstable();
    let mut weights = Vec::with_capacity(exps.len());
    let mut provenance = Vec::with_capacity(exps.len());
    for &e in &exps {
        let parts: Vec<usize> = (0..ms.len()).filter(|&i| e % ms[i] == 0).collect();
        let terms = parts
            .iter()
            .map(|&i| rule.part_weight(field, i, e))
            .collect::<Result<Vec<_>>>()?;
        let w = field.sum(terms);
        if w.is_zero() {
            return Err(Error::ZeroWeightAtSharedPoint(e));
        }
        if !field.in_subfield(w) {
            return Err(Error::NotInSubfield);
        }
        weights.push(w);
        provenance.push(parts.iter().map(|&i| ms[i]).collect());
    }
    Ok(EvalSet {
        points: exps.into_iter().map(|e| field.pow_theta(e as i128)).collect(),
        weights,
        provenance,
    })
}

/// The first `H = θ^{(q+1)s}`, by ascending `s`, for which the mixed weight
/// `u^{q+1} + H·u^{(q+1)/2}` is nonzero at every point shared by the
/// subgroups of index `m_odd | q+1` and `m_even | q-1`.
pub fn find_h(field: &Field, m_odd: u64, m_even: u64) -> Result<Elt> {
    let q = field.q();
    if field.p() == 2 {
        return Err(Error::HypothesisViolated("odd characteristic required".into()));
    }
    if m_odd % 2 == 0 || (q + 1) % m_odd != 0 {
        return Err(Error::HypothesisViolated(format!(
            "{m_odd} is not an odd divisor of q+1"
        )));
    }
    if m_even % 2 != 0 || (q - 1) % m_even != 0 {
        return Err(Error::HypothesisViolated(format!(
            "{m_even} is not an even divisor of q-1"
        )));
    }
    let order = field.order();
    let step = lcm(m_odd, m_even);
    // H is forbidden when H = -u^{(q+1)/2} for a shared point u = θ^e
    let forbidden: HashSet<u64> = (0..order)
        .step_by(step as usize)
        .map(|e| {
            let half = mul_mod(e, (q + 1) / 2, order);
            field.neg(field.pow_theta(half as i128)).raw()
        })
        .collect();
    (0..q - 1)
        .map(|s| s * (q + 1))
        .find(|e| !forbidden.contains(e))
        .map(|e| field.pow_theta(e as i128))
        .ok_or(Error::NoValidH)
}

/// |union of the subgroups of index ms[i]| in a cyclic group of order
/// `order`, by inclusion-exclusion over lcms.
pub fn union_size(order: u64, ms: &[u64]) -> u64 {
    subset_fold(order, ms, |size, count| {
        if size % 2 == 1 {
            count as i128
        } else {
            -(count as i128)
        }
    })
}

/// Size of the parity union: points in an odd number of subgroups.
pub fn parity_union_size(order: u64, ms: &[u64]) -> u64 {
    // a point in exactly t subgroups is counted Σ_{i≥1} C(t,i)(-2)^{i-1}
    // = (1 - (-1)^t)/2 times
    subset_fold(order, ms, |size, count| (-2i128).pow(size as u32 - 1) * count as i128)
}

fn subset_fold(order: u64, ms: &[u64], weight: impl Fn(usize, u64) -> i128) -> u64 {
    let mut total = 0i128;
    for mask in 1u32..(1 << ms.len()) {
        let chosen: Vec<u64> = (0..ms.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ms[i])
            .collect();
        let l = chosen.iter().fold(1, |a, &b| lcm(a, b));
        total += weight(chosen.len(), order / gcd(order, l));
    }
    u64::try_from(total).expect("nonnegative count")
}

/// Number of points lying in exactly the subgroups of each multiplicity
/// `t = 1..=s`, by inclusion-exclusion.
pub fn multiplicity_counts(order: u64, ms: &[u64]) -> Vec<u64> {
    let s = ms.len();
    let mut out = vec![0i128; s + 1];
    for mask in 1u32..(1 << s) {
        // points whose containing set is exactly `mask`
        let mut exact = 0i128;
        for sup in mask..(1 << s) {
            if sup & mask != mask {
                continue;
            }
            let l = (0..s)
                .filter(|i| sup >> i & 1 == 1)
                .fold(1, |a, i| lcm(a, gcd(order, ms[i])));
            let count = (order / gcd(order, l)) as i128;
            let sign = if (sup.count_ones() - mask.count_ones()) % 2 == 0 { 1 } else { -1 };
            exact += sign * count;
        }
        out[mask.count_ones() as usize] += exact;
    }
    out.into_iter().map(|c| c as u64).collect()
}
