//! Exact arithmetic in GF(p^{2h}) with the subfield GF(q), q = p^h.
//!
//! Every element is carried as a power of a fixed primitive element θ (or as
//! zero). Multiplication, powers, Frobenius and norms are exponent
//! arithmetic modulo `q^2 - 1`; only addition and logarithms touch the
//! polynomial basis, through one of two backends:
//!
//! * [`BackendMode::Table`]: full log/antilog arrays plus a Zech table, for
//!   `q^2 <= 2^22`.
//! * [`BackendMode::Bsgs`]: polynomial arithmetic with a baby-step giant-step
//!   discrete log, for `q^2 <= 2^40`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, pow_mod, prime_divisors};

pub const TABLE_MAX_ORDER: u64 = 1 << 22;
pub const BSGS_MAX_ORDER: u64 = 1 << 40;

const NONE32: u32 = u32::MAX;

/// A field element: zero, or θ^e with `e` reduced modulo `q^2 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elt(u64);

impl Elt {
    pub const ZERO: Elt = Elt(u64::MAX);
    pub const ONE: Elt = Elt(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == u64::MAX
    }

    /// The exponent of θ, or `None` for zero.
    #[inline]
    pub fn exponent(self) -> Option<u64> {
        (!self.is_zero()).then_some(self.0)
    }

    /// Raw exponent; the caller guarantees the element is nonzero.
    #[inline]
    pub(crate) fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent() {
            None => write!(f, "0"),
            Some(e) => write!(f, "θ^{e}"),
        }
    }
}

/// `"z"` for zero, otherwise the decimal exponent.
impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent() {
            None => f.write_str("z"),
            Some(e) => write!(f, "{e}"),
        }
    }
}

impl FromStr for Elt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "z" {
            return Ok(Elt::ZERO);
        }
        s.parse::<u64>()
            .ok()
            .filter(|&e| e != u64::MAX)
            .map(Elt)
            .ok_or_else(|| Error::Parse(format!("bad element token {s:?}")))
    }
}

impl Serialize for Elt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Elt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing lists of nonzero elements as bare exponents.
pub mod exponent_list {
    use super::Elt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Elt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|e| e.0))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Elt>, D::Error> {
        let raw = Vec::<u64>::deserialize(d)?;
        if raw.contains(&u64::MAX) {
            return Err(serde::de::Error::custom("exponent out of range"));
        }
        Ok(raw.into_iter().map(Elt).collect())
    }
}

/// Serializable description of a field: `{p, h, modulus, theta: "x"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub h: u32,
    /// Coefficients `c0..c_{2h}` of the monic modulus, low degree first.
    pub modulus: Vec<u64>,
    pub theta: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BackendMode {
    Table,
    Bsgs,
}

/// Polynomials over GF(p) reduced modulo a monic polynomial of degree `n`.
/// Residues are coefficient vectors of length `n`, low degree first.
#[derive(Debug, Clone)]
struct PolyRing {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

impl PolyRing {
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }

    fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        if self.n == 1 {
            v[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            v[1] = 1;
        }
        v
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (p, n) = (self.p, self.n);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let sub = c * self.modulus[i] % p;
                let slot = &mut prod[d - n + i];
                *slot = (*slot + p - sub) % p;
            }
        }
        prod.truncate(n);
        prod
    }

    fn pow(&self, base: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn pack(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    fn unpack(&self, mut v: u64) -> Vec<u64> {
        let mut out = vec![0; self.n];
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    fn is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }
}

// Plain polynomials over GF(p) (trailing zeros trimmed), used only for the
// irreducibility check.
fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = pow_mod(*b.last().expect("nonzero divisor"), p - 2, p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().copied().unwrap_or(0) * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

#[derive(Debug)]
enum Backend {
    Table {
        antilog: Vec<u32>,
        log: Vec<u32>,
        /// `zech[e] = log(1 + θ^e)`, `NONE32` when the sum is zero.
        zech: Vec<u32>,
    },
    Bsgs {
        baby: HashMap<u64, u64>,
        giant: Vec<u64>,
        stride: u64,
    },
}

/// The field GF(p^{2h}) with its canonical primitive element.
///
/// The modulus is the lexicographically smallest monic polynomial of degree
/// `2h` (coefficients compared from `c0` upward) whose residue `x` has order
/// `p^{2h} - 1`; θ is that residue.
#[derive(Debug)]
pub struct Field {
    p: u64,
    h: u32,
    q: u64,
    q2: u64,
    order: u64,
    ring: PolyRing,
    mode: BackendMode,
    backend: Backend,
}

impl Field {
    /// Builds GF(p^{2h}), choosing the table backend whenever it fits.
    pub fn new(p: u64, h: u32) -> Result<Self> {
        let q2 = Self::check_capacity(p, h)?;
        let mode = if q2 <= TABLE_MAX_ORDER {
            BackendMode::Table
        } else {
            BackendMode::Bsgs
        };
        Self::with_mode(p, h, mode)
    }

    /// Builds GF(q^2) for a prime power `q`.
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, h) = crate::numtheory::prime_power(q)
            .ok_or_else(|| Error::HypothesisViolated(format!("q = {q} is not a prime power")))?;
        Self::new(p, h)
    }

    fn check_capacity(p: u64, h: u32) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::HypothesisViolated("extension degree h must be >= 1".into()));
        }
        let n = 2 * h;
        p.checked_pow(n)
            .filter(|&q2| q2 <= BSGS_MAX_ORDER)
            .ok_or(Error::CapacityExceeded { p, n })
    }

    pub fn with_mode(p: u64, h: u32, mode: BackendMode) -> Result<Self> {
        let q2 = Self::check_capacity(p, h)?;
        if mode == BackendMode::Table && q2 > TABLE_MAX_ORDER {
            return Err(Error::CapacityExceeded { p, n: 2 * h });
        }
        let n = 2 * h as usize;
        let order = q2 - 1;
        let ring = Self::find_modulus(p, n, order);
        let backend = match mode {
            BackendMode::Table => Self::build_tables(&ring, order),
            BackendMode::Bsgs => Self::build_bsgs(&ring, order),
        };
        Ok(Self {
            p,
            h,
            q: p.pow(h),
            q2,
            order,
            ring,
            mode,
            backend,
        })
    }

    fn find_modulus(p: u64, n: usize, order: u64) -> PolyRing {
        let cofactors: Vec<u64> = prime_divisors(order).into_iter().map(|r| order / r).collect();
        let top = p.pow(n as u32 - 1);
        // Index with c0 as the most significant digit so that counting
        // upward walks the lexicographic order; c0 = 0 is never primitive.
        for idx in top..top * p {
            let mut modulus = vec![0u64; n + 1];
            let mut v = idx;
            for i in (0..n).rev() {
                modulus[i] = v % p;
                v /= p;
            }
            modulus[n] = 1;
            let ring = PolyRing { p, n, modulus };
            let x = ring.x();
            if ring.is_one(&ring.pow(&x, order))
                && cofactors.iter().all(|&c| !ring.is_one(&ring.pow(&x, c)))
            {
                return ring;
            }
        }
        unreachable!("a primitive polynomial of every degree exists")
    }

    fn build_tables(ring: &PolyRing, order: u64) -> Backend {
        let size = (order + 1) as usize;
        let p = ring.p;
        let mut antilog = vec![0u32; order as usize];
        let mut log = vec![NONE32; size];
        let mut cur = ring.one();
        let mut packed = 1u64;
        for e in 0..order {
            antilog[e as usize] = packed as u32;
            log[packed as usize] = e as u32;
            // multiply by x
            let carry = cur[ring.n - 1];
            for i in (1..ring.n).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if carry != 0 {
                for i in 0..ring.n {
                    cur[i] = (cur[i] + p - carry * ring.modulus[i] % p) % p;
                }
            }
            packed = ring.pack(&cur);
        }
        let zech = antilog
            .iter()
            .map(|&a| {
                let a = a as u64;
                let plus_one = if a % p == p - 1 { a - (p - 1) } else { a + 1 };
                log[plus_one as usize]
            })
            .collect();
        Backend::Table { antilog, log, zech }
    }

    fn build_bsgs(ring: &PolyRing, order: u64) -> Backend {
        let stride = (order as f64).sqrt().ceil() as u64;
        let x = ring.x();
        let mut baby = HashMap::with_capacity(stride as usize);
        let mut cur = ring.one();
        for j in 0..stride {
            baby.entry(ring.pack(&cur)).or_insert(j);
            cur = ring.mul(&cur, &x);
        }
        let giant = ring.pow(&x, order - stride % order);
        Backend::Bsgs { baby, giant, stride }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q2(&self) -> u64 {
        self.q2
    }

    /// `q^2 - 1`, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn mode(&self) -> BackendMode {
        self.mode
    }

    pub fn modulus(&self) -> &[u64] {
        &self.ring.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            h: self.h,
            modulus: self.ring.modulus.clone(),
            theta: "x".into(),
        }
    }

    pub fn theta(&self) -> Elt {
        Elt(1 % self.order)
    }

    /// θ^e for any integer `e`.
    pub fn pow_theta(&self, e: i128) -> Elt {
        Elt(e.rem_euclid(self.order as i128) as u64)
    }

    /// Parses an element token and checks it lies in this field.
    pub fn parse_elt(&self, token: &str) -> Result<Elt> {
        let a: Elt = token.parse()?;
        match a.exponent() {
            Some(e) if e >= self.order => Err(Error::Parse(format!(
                "exponent {e} out of range for GF({})",
                self.q2
            ))),
            _ => Ok(a),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a.is_zero() || b.is_zero() {
            return Elt::ZERO;
        }
        let s = a.0 + b.0;
        Elt(if s >= self.order { s - self.order } else { s })
    }

    pub fn inv(&self, a: Elt) -> Result<Elt> {
        match a.exponent() {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Elt::ONE),
            Some(e) => Ok(Elt(self.order - e)),
        }
    }

    pub fn div(&self, a: Elt, b: Elt) -> Result<Elt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` for any integer `n`; `0^0 = 1`, and negative powers of zero are
    /// a division by zero.
    pub fn pow(&self, a: Elt, n: i64) -> Result<Elt> {
        match a.exponent() {
            None if n == 0 => Ok(Elt::ONE),
            None if n < 0 => Err(Error::DivisionByZero),
            None => Ok(Elt::ZERO),
            Some(e) => Ok(self.pow_theta(e as i128 * n as i128)),
        }
    }

    pub fn neg(&self, a: Elt) -> Elt {
        if a.is_zero() || self.p == 2 {
            return a;
        }
        let s = a.0 + self.order / 2;
        Elt(if s >= self.order { s - self.order } else { s })
    }

    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        match &self.backend {
            Backend::Table { zech, .. } => {
                let d = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + self.order - a.0 };
                let z = zech[d as usize];
                if z == NONE32 {
                    Elt::ZERO
                } else {
                    let s = a.0 + z as u64;
                    Elt(if s >= self.order { s - self.order } else { s })
                }
            }
            Backend::Bsgs { .. } => {
                let sum = self.ring.add(&self.to_coeffs(a), &self.to_coeffs(b));
                self.from_coeffs(&sum)
            }
        }
    }

    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    /// Sum of many elements. The BSGS backend accumulates coefficients and
    /// takes a single logarithm at the end.
    pub fn sum<I: IntoIterator<Item = Elt>>(&self, items: I) -> Elt {
        match &self.backend {
            Backend::Table { .. } => items.into_iter().fold(Elt::ZERO, |acc, x| self.add(acc, x)),
            Backend::Bsgs { .. } => {
                let mut acc = vec![0u64; self.ring.n];
                for x in items {
                    if x.is_zero() {
                        continue;
                    }
                    for (s, c) in acc.iter_mut().zip(self.to_coeffs(x)) {
                        *s = (*s + c) % self.p;
                    }
                }
                self.from_coeffs(&acc)
            }
        }
    }

    /// Sum of θ^e over raw exponents, each already reduced modulo the order.
    #[inline]
    pub(crate) fn sum_exponents<I: IntoIterator<Item = u64>>(&self, exps: I) -> Elt {
        match &self.backend {
            Backend::Table { zech, .. } => {
                let n = self.order;
                let mut acc = Elt::ZERO;
                for e in exps {
                    if acc.is_zero() {
                        acc = Elt(e);
                        continue;
                    }
                    let d = if e >= acc.0 { e - acc.0 } else { e + n - acc.0 };
                    let z = zech[d as usize];
                    acc = if z == NONE32 {
                        Elt::ZERO
                    } else {
                        let s = acc.0 + z as u64;
                        Elt(if s >= n { s - n } else { s })
                    };
                }
                acc
            }
            Backend::Bsgs { .. } => self.sum(exps.into_iter().map(Elt)),
        }
    }

    /// `a ↦ a^q`.
    #[inline]
    pub fn frobenius_q(&self, a: Elt) -> Elt {
        match a.exponent() {
            None => a,
            Some(e) => Elt(crate::numtheory::mul_mod(e, self.q, self.order)),
        }
    }

    /// `a ∈ GF(q)`, i.e. `a^q = a`.
    pub fn in_subfield(&self, a: Elt) -> bool {
        match a.exponent() {
            None => true,
            Some(e) => e % (self.q + 1) == 0,
        }
    }

    /// The norm `a^{q+1}` onto GF(q).
    pub fn norm(&self, a: Elt) -> Elt {
        match a.exponent() {
            None => a,
            Some(e) => self.pow_theta(e as i128 * (self.q + 1) as i128),
        }
    }

    /// The element θ^t with the least `t >= 0` such that `(θ^t)^{q+1} = v`.
    pub fn norm_root(&self, v: Elt) -> Result<Elt> {
        match v.exponent() {
            Some(e) if e % (self.q + 1) == 0 => Ok(Elt(e / (self.q + 1))),
            _ => Err(Error::NotInSubfield),
        }
    }

    pub fn discrete_log(&self, a: Elt) -> Result<u64> {
        a.exponent().ok_or(Error::ZeroArgument)
    }

    /// The integer `n` embedded in the prime field.
    pub fn from_int(&self, n: i64) -> Elt {
        let mut coeffs = vec![0u64; self.ring.n];
        coeffs[0] = n.rem_euclid(self.p as i64) as u64;
        self.from_coeffs(&coeffs)
    }

    /// Polynomial-basis coefficients of `a`, low degree first.
    pub fn to_coeffs(&self, a: Elt) -> Vec<u64> {
        match a.exponent() {
            None => vec![0; self.ring.n],
            Some(e) => match &self.backend {
                Backend::Table { antilog, .. } => self.ring.unpack(antilog[e as usize] as u64),
                Backend::Bsgs { .. } => self.ring.pow(&self.ring.x(), e),
            },
        }
    }

    /// The element with the given coefficients, via the backend's logarithm.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Elt {
        assert_eq!(coeffs.len(), self.ring.n, "coefficient vector length");
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        if reduced.iter().all(|&c| c == 0) {
            return Elt::ZERO;
        }
        match &self.backend {
            Backend::Table { log, .. } => Elt(log[self.ring.pack(&reduced) as usize] as u64),
            Backend::Bsgs {
                baby,
                giant,
                stride,
            } => {
                let mut y = reduced;
                let mut i = 0u64;
                loop {
                    if let Some(&j) = baby.get(&self.ring.pack(&y)) {
                        return Elt((i * stride + j) % self.order);
                    }
                    i += 1;
                    assert!(i * stride <= self.order + stride, "element outside the group");
                    y = self.ring.mul(&y, giant);
                }
            }
        }
    }

    /// Recomputes `x^e` in the polynomial basis and compares with one.
    pub fn poly_power_is_one(&self, e: u64) -> bool {
        self.ring.is_one(&self.ring.pow(&self.ring.x(), e))
    }

    /// Checks that θ has order exactly `q^2 - 1` with polynomial arithmetic.
    pub fn verify_primitive(&self) -> bool {
        self.poly_power_is_one(self.order)
            && prime_divisors(self.order)
                .into_iter()
                .all(|r| !self.poly_power_is_one(self.order / r))
    }

    /// Irreducibility of the modulus: no common factor with `x^{p^i} - x` for
    /// any proper `i < 2h`.
    pub fn modulus_is_irreducible(&self) -> bool {
        let p = self.p;
        let x = self.ring.x();
        let mut frob = x.clone();
        for _ in 1..self.ring.n {
            frob = self.ring.pow(&frob, p);
            let mut diff = frob.clone();
            if self.ring.n > 1 {
                diff[1] = (diff[1] + p - 1) % p;
            } else {
                diff[0] = (diff[0] + p - x[0]) % p;
            }
            let g = poly_gcd(&self.ring.modulus, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_modulus_and_addition() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.order(), 3);
        let t = f.theta();
        let t2 = f.mul(t, t);
        assert_eq!(f.add(t, t2), Elt::ONE);
        assert_eq!(f.pow(t, 3).unwrap(), Elt::ONE);
    }

    #[test]
    fn gf25_modulus_is_the_smallest_primitive_quadratic() {
        // Oracle: enumerate monic quadratics over GF(5) in lexicographic
        // order (c0, c1) and keep the first whose root has order 24, checked
        // by brute-force powering of x modulo the candidate.
        let p = 5u64;
        let mut expected = None;
        'outer: for c0 in 0..p {
            for c1 in 0..p {
                // x^2 = -c1 x - c0
                let mulx = |(a0, a1): (u64, u64)| -> (u64, u64) {
                    ((p - c0 * a1 % p) % p, (a0 + p - c1 * a1 % p) % p)
                };
                let mut cur = (1u64, 0u64);
                let mut ord = 0;
                for k in 1..=24 {
                    cur = mulx(cur);
                    if cur == (1, 0) {
                        ord = k;
                        break;
                    }
                }
                if ord == 24 {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = Field::new(5, 1).unwrap();
        assert_eq!(Some(f.modulus().to_vec()), expected);
        let norm = f.pow(f.theta(), 6).unwrap();
        assert!(f.in_subfield(norm));
        let orders: Vec<i64> = (1..=4).filter(|&k| f.pow(norm, k).unwrap() == Elt::ONE).collect();
        assert_eq!(orders, vec![4]);
    }

    #[test]
    fn gf169_primitive_by_polynomial_powering() {
        let f = Field::new(13, 1).unwrap();
        assert!(f.poly_power_is_one(168));
        for e in [84, 56, 24] {
            assert!(!f.poly_power_is_one(e));
        }
        assert!(f.verify_primitive());
        assert!(f.modulus_is_irreducible());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 21), Err(Error::CapacityExceeded { .. })));
        assert!(matches!(
            Field::with_mode(2, 12, BackendMode::Table),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn identities_and_division() {
        let f = Field::new(3, 2).unwrap();
        let a = f.pow_theta(17);
        assert_eq!(f.add(a, Elt::ZERO), a);
        assert_eq!(f.mul(a, Elt::ONE), a);
        assert_eq!(f.inv(Elt::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elt::ONE);
        assert_eq!(f.add(a, f.neg(a)), Elt::ZERO);
        assert_eq!(f.discrete_log(Elt::ZERO), Err(Error::ZeroArgument));
        assert_eq!(f.discrete_log(Elt::ONE), Ok(0));
        assert_eq!(f.discrete_log(f.theta()), Ok(1));
    }

    #[test]
    fn frobenius_examples() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.frobenius_q(Elt::ZERO), Elt::ZERO);
        assert_eq!(f.frobenius_q(f.theta()), f.pow_theta(2));
    }

    #[test]
    fn subfield_count_in_gf25() {
        let f = Field::new(5, 1).unwrap();
        let count = (0..f.order()).filter(|&e| f.in_subfield(f.pow_theta(e as i128))).count();
        assert_eq!(count, 4);
        assert!(f.in_subfield(f.pow_theta(6)));
        assert!(!f.in_subfield(f.theta()));
    }

    #[test]
    fn norm_root_of_two_in_gf25() {
        let f = Field::new(5, 1).unwrap();
        let two = f.from_int(2);
        let root = f.norm_root(two).unwrap();
        assert_eq!(f.pow(root, 6).unwrap(), two);
        // exhaustive oracle: the least exponent t with (θ^t)^6 = 2
        let least = (0..24).find(|&t| f.pow_theta(6 * t) == two).unwrap();
        assert_eq!(root, f.pow_theta(least));
        assert_eq!(f.norm_root(Elt::ONE), Ok(Elt::ONE));
        assert_eq!(f.norm_root(f.theta()), Err(Error::NotInSubfield));
        assert_eq!(f.norm_root(Elt::ZERO), Err(Error::NotInSubfield));
    }

    #[test]
    fn element_tokens() {
        assert_eq!("z".parse::<Elt>().unwrap(), Elt::ZERO);
        assert_eq!("12".parse::<Elt>().unwrap().exponent(), Some(12));
        assert!("x".parse::<Elt>().is_err());
        let f = Field::new(2, 1).unwrap();
        assert!(f.parse_elt("3").is_err());
        assert_eq!(Elt::ZERO.to_string(), "z");
    }

    #[test]
    fn spec_json_shape() {
        let f = Field::new(2, 1).unwrap();
        let json = serde_json::to_string(&f.spec()).unwrap();
        assert_eq!(json, r#"{"p":2,"h":1,"modulus":[1,1,1],"theta":"x"}"#);
    }
}
