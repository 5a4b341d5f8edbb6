//! Integer-side machinery: primality, factorization, and the searches over
//! primes in progressions, admissible divisor pairs, and the `16k^2 - 12k + 1`
//! family.

use serde::Serialize;

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

// Bases sufficient for every n < 2^64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin over the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut g, mut x, mut ys) = (1u64, 0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization as `(prime, multiplicity)` pairs in ascending order.
/// `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Returns `(p, h)` when `n = p^h` for a prime `p` and `h >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, h)] => Some((*p, *h)),
        _ => None,
    }
}

pub fn is_prime_power(n: u64) -> bool {
    prime_power(n).is_some()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// The arithmetic progression of primes with `m1 | q - 1` and `m2 | q + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub m1: u64,
    pub m2: u64,
    /// `l0 * m1 + 2 = k0 * m2`, with `l0` the least non-negative solution.
    pub l0: u64,
    pub k0: u64,
    /// Every term is `start + step * t`.
    pub start: u64,
    pub step: u64,
}

impl Progression {
    pub fn new(m1: u64, m2: u64) -> Result<Self> {
        if m1 == 0 || m2 == 0 || m1 % 2 != 0 || m2 % 2 != 1 {
            return Err(Error::HypothesisViolated(format!(
                "need m1 even and m2 odd, got ({m1}, {m2})"
            )));
        }
        if gcd(m1, m2) != 1 {
            return Err(Error::NotCoprime(m1, m2));
        }
        let l0 = if m2 == 1 {
            0
        } else {
            // l0 * m1 = -2 (mod m2)
            let inv = inv_mod(m1 % m2, m2).ok_or(Error::NotCoprime(m1, m2))?;
            mul_mod(m2 - 2 % m2, inv, m2)
        };
        let k0 = (l0 * m1 + 2) / m2;
        Ok(Self {
            m1,
            m2,
            l0,
            k0,
            start: l0 * m1 + 1,
            step: m1 * m2,
        })
    }

    /// Primes in the progression up to `limit`, each rechecked against both
    /// divisibility conditions.
    pub fn primes_up_to(&self, limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut q = self.start;
        while q <= limit {
            if is_prime(q) && (q - 1) % self.m1 == 0 && (q + 1) % self.m2 == 0 {
                out.push(q);
            }
            q = match q.checked_add(self.step) {
                Some(next) => next,
                None => break,
            };
        }
        out
    }

    /// First `count` primes of the progression, scanning at most `max_terms`.
    pub fn first_primes(&self, count: usize, max_terms: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut q = self.start;
        for _ in 0..max_terms {
            if out.len() >= count {
                break;
            }
            if is_prime(q) {
                out.push(q);
            }
            q = match q.checked_add(self.step) {
                Some(next) => next,
                None => break,
            };
        }
        out
    }
}

/// Primes `q <= limit` with `m1 | q - 1` and `m2 | q + 1`.
pub fn dirichlet_search(m1: u64, m2: u64, limit: u64) -> Result<Vec<u64>> {
    Ok(Progression::new(m1, m2)?.primes_up_to(limit))
}

/// An admissible divisor pair: `m1` even, `m2` odd, coprime, with
/// `(m1 + m2 - 1) * m = m1 * m2` and `m` sharing a factor with each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCertificate {
    pub m1: u64,
    pub m2: u64,
    pub m: u64,
    pub l0: u64,
    pub k0: u64,
    pub witness_primes: Vec<u64>,
}

impl PairCertificate {
    pub fn is_valid(&self) -> bool {
        self.m1 % 2 == 0
            && self.m2 % 2 == 1
            && gcd(self.m1, self.m2) == 1
            && (self.m1 + self.m2 - 1) * self.m == self.m1 * self.m2
            && gcd(self.m1, self.m) > 1
            && gcd(self.m2, self.m) > 1
            && self.l0 * self.m1 + 2 == self.k0 * self.m2
            && self
                .witness_primes
                .iter()
                .all(|&q| is_prime(q) && (q - 1) % self.m1 == 0 && (q + 1) % self.m2 == 0)
    }
}

const WITNESS_COUNT: usize = 2;
const WITNESS_SCAN: u64 = 100_000;

/// All admissible pairs with `m1, m2 <= limit`, sorted by `(m1, m2)`.
///
/// With `s = m1 + m2 - 1` the condition `s | m1 m2` is equivalent to
/// `s | m2 (m2 - 1)`, so each odd `m2` only needs the divisors of
/// `m2 (m2 - 1)` above `m2`.
pub fn pair_search(limit: u64) -> Vec<PairCertificate> {
    let mut out = Vec::new();
    let mut m2 = 3u64;
    while m2 <= limit {
        for s in divisors(m2 * (m2 - 1)) {
            if s < m2 + 1 {
                continue;
            }
            let m1 = s + 1 - m2;
            if m1 > limit || m1 % 2 != 0 || gcd(m1, m2) != 1 {
                continue;
            }
            let m = m1 * m2 / s;
            if gcd(m1, m) == 1 || gcd(m2, m) == 1 {
                continue;
            }
            let prog = Progression::new(m1, m2).expect("checked coprime, parities");
            out.push(PairCertificate {
                m1,
                m2,
                m,
                l0: prog.l0,
                k0: prog.k0,
                witness_primes: prog.first_primes(WITNESS_COUNT, WITNESS_SCAN),
            });
        }
        m2 += 2;
    }
    out.sort_by_key(|c| (c.m1, c.m2));
    out
}

/// One accepted member of the `q = 16k^2 - 12k + 1` family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub k: u64,
    pub q: u64,
    pub p: u64,
    pub h: u32,
    /// Even divisor of `q - 1`.
    pub m1: u64,
    /// Odd divisor of `q + 1`.
    pub m2: u64,
    pub length: u64,
    /// Closed-form distance bound `(q + 1)/2 + (2k - 1)/3`.
    pub d_max_claimed: u64,
    /// Largest distance certified by the exponent-condition oracle.
    pub d_max_oracle: u64,
    /// `3k` divides neither `q - 1` nor `q + 1`.
    pub outside_cyclotomic_divisors: bool,
}

/// Members of the family for all `k <= k_limit` with `k = 5 (mod 9)` and
/// `q` a prime power.
pub fn quadratic_family(k_limit: u64) -> Vec<FamilyMember> {
    use crate::constructions::Construction;
    use crate::verifier::max_dim_fast;

    let mut out = Vec::new();
    let mut k = 5u64;
    while k <= k_limit {
        let Some(q) = (16 * k)
            .checked_mul(k)
            .and_then(|v| v.checked_sub(12 * k - 1))
        else {
            break;
        };
        // q^2 must stay inside u64 arithmetic.
        if q >= 1 << 32 {
            break;
        }
        if let Some((p, h)) = prime_power(q) {
            let m1 = 4 * k;
            let m2 = 3 * (4 * k - 1);
            let order = q * q - 1;
            let terms = Construction::MixedUnion
                .condition_terms(q, &[m2, m1])
                .expect("family parameters satisfy the divisibility hypotheses");
            let k_max = max_dim_fast(q, &terms) as u64;
            out.push(FamilyMember {
                k,
                q,
                p,
                h,
                m1,
                m2,
                length: order / (3 * k),
                d_max_claimed: (q + 1) / 2 + (2 * k - 1) / 3,
                d_max_oracle: k_max + 1,
                outside_cyclotomic_divisors: (q - 1) % (3 * k) != 0 && (q + 1) % (3 * k) != 0,
            });
        }
        k += 9;
    }
    out
}
