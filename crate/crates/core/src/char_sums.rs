//! Power sums over multiplicative subgroups of GF(q^2)* and their unions.
//!
//! For a divisor `m` of `q^2 - 1` the subgroup of index `m` has order
//! `n = (q^2 - 1)/m` and is generated by θ^m. Its power sums vanish unless
//! `n | t`, in which case every term is one and the sum is `n mod p`.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::numtheory::{gcd, mul_mod};

pub(crate) fn subgroup_order(field: &Field, m: u64) -> Result<u64> {
    let order = field.order();
    if m == 0 || order % m != 0 {
        return Err(Error::BadDivisor { m, order });
    }
    Ok(order / m)
}

/// Σ_{j=1}^{n} θ^{j·t·m}, accumulated term by term.
pub fn subgroup_power_sum(field: &Field, m: u64, t: i64) -> Result<Elt> {
    let n = subgroup_order(field, m)?;
    let order = field.order();
    let t = t.rem_euclid(order as i64) as u64;
    let step = mul_mod(t, m, order);
    let mut e = 0u64;
    Ok(field.sum_exponents((0..n).map(|_| {
        e += step;
        if e >= order {
            e -= order;
        }
        e
    })))
}

/// True exactly when the subgroup power sum is zero, decided without
/// touching the field: the sum is zero iff `n ∤ t` or `p | n`.
pub fn subgroup_sum_is_zero(field: &Field, m: u64, t: i64) -> Result<bool> {
    let n = subgroup_order(field, m)?;
    if t.rem_euclid(n as i64) != 0 {
        return Ok(true);
    }
    Ok(n % field.p() == 0)
}

pub(crate) fn check_pairwise_coprime(ms: &[u64]) -> Result<()> {
    for (i, &a) in ms.iter().enumerate() {
        for &b in &ms[i + 1..] {
            if gcd(a, b) != 1 {
                return Err(Error::NotCoprime(a, b));
            }
        }
    }
    Ok(())
}

/// Exponents `e` in `[0, q^2-1)` with θ^e in an odd number of the subgroups
/// of index `ms[i]`, in ascending order.
pub(crate) fn parity_union_exponents(field: &Field, ms: &[u64]) -> Result<Vec<u64>> {
    if field.p() != 2 {
        return Err(Error::NotChar2);
    }
    for &m in ms {
        subgroup_order(field, m)?;
    }
    check_pairwise_coprime(ms)?;
    let mut out = Vec::new();
    for (i, &m) in ms.iter().enumerate() {
        for e in (0..field.order()).step_by(m as usize) {
            // count each point once, from the first subgroup containing it
            if ms[..i].iter().any(|&prev| e % prev == 0) {
                continue;
            }
            if ms.iter().filter(|&&d| e % d == 0).count() % 2 == 1 {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Σ u^t over the parity-filtered union of subgroups in characteristic 2.
pub fn union_power_sum_char2(field: &Field, ms: &[u64], t: i64) -> Result<Elt> {
    let points = parity_union_exponents(field, ms)?;
    let order = field.order();
    let t = t.rem_euclid(order as i64) as u64;
    Ok(field.sum_exponents(points.into_iter().map(|e| mul_mod(e, t, order))))
}
