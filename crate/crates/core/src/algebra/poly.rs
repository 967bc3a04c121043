//! The polynomial ring A = F_q[T].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::field::{prime_divisors, Fq};
use crate::algebra::ring::{FqAlgebra, Ring};
use crate::error::{Error, Result};

/// Largest number of candidates `irreducibles` will scan.
pub const MAX_ENUMERATION: u128 = 20_000_000;

/// Element of F_q[T]: coefficients lowest degree first, no trailing zeros.
/// Coefficients are F_q indices (see [`Fq`]).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct APoly(Vec<u8>);

impl APoly {
    pub fn from_coeffs(mut c: Vec<u8>) -> APoly {
        while c.last() == Some(&0) {
            c.pop();
        }
        APoly(c)
    }

    pub fn zero() -> APoly {
        APoly(Vec::new())
    }
    pub fn one() -> APoly {
        APoly(vec![1])
    }
    pub fn constant(c: u8) -> APoly {
        APoly::from_coeffs(vec![c])
    }
    /// The variable T.
    pub fn t() -> APoly {
        APoly(vec![0, 1])
    }
    pub fn monomial(c: u8, d: usize) -> APoly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        APoly::from_coeffs(v)
    }
    /// Residue with index `n`: base-q digits, lowest degree first.
    pub fn from_index(mut n: u64, q: u8) -> APoly {
        let mut v = Vec::new();
        while n > 0 {
            v.push((n % q as u64) as u8);
            n /= q as u64;
        }
        APoly(v)
    }
    pub fn index(&self, q: u8) -> u64 {
        self.0.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.0
    }
    pub fn coeff(&self, i: usize) -> u8 {
        self.0.get(i).copied().unwrap_or(0)
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// Degree with `deg 0 = 0`; only for size bookkeeping.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }
    pub fn lead(&self) -> u8 {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, o: &APoly, f: &Fq) -> APoly {
        let n = self.0.len().max(o.0.len());
        APoly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &APoly, f: &Fq) -> APoly {
        let n = self.0.len().max(o.0.len());
        APoly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, f: &Fq) -> APoly {
        APoly(self.0.iter().map(|&c| f.neg(c)).collect())
    }
    pub fn scale(&self, c: u8, f: &Fq) -> APoly {
        APoly::from_coeffs(self.0.iter().map(|&x| f.mul(c, x)).collect())
    }
    pub fn mul(&self, o: &APoly, f: &Fq) -> APoly {
        if self.is_zero() || o.is_zero() {
            return APoly::zero();
        }
        let mut v = vec![0u8; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        APoly::from_coeffs(v)
    }
    pub fn pow(&self, mut e: u64, f: &Fq) -> APoly {
        let mut base = self.clone();
        let mut acc = APoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &APoly, f: &Fq) -> (APoly, APoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (APoly::zero(), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut quo = vec![0u8; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &dj) in d.0.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        (APoly::from_coeffs(quo), APoly::from_coeffs(r))
    }
    pub fn rem(&self, d: &APoly, f: &Fq) -> APoly {
        if self.0.len() < d.0.len() {
            return self.clone();
        }
        self.divrem(d, f).1
    }
    pub fn divides(&self, other: &APoly, f: &Fq) -> bool {
        other.rem(self, f).is_zero()
    }

    pub fn monic(&self, f: &Fq) -> APoly {
        if self.is_zero() {
            return APoly::zero();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &APoly, f: &Fq) -> APoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(g, s, t)` with `g = s*self + t*o` monic.
    pub fn ext_gcd(&self, o: &APoly, f: &Fq) -> (APoly, APoly, APoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (APoly::one(), APoly::zero());
        let (mut t0, mut t1) = (APoly::zero(), APoly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1, f);
            let s2 = s0.sub(&qt.mul(&s1, f), f);
            let t2 = t0.sub(&qt.mul(&t1, f), f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = f.inv(r0.lead());
        (r0.scale(c, f), s0.scale(c, f), t0.scale(c, f))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &APoly, f: &Fq) -> Option<APoly> {
        let (g, s, _) = self.rem(m, f).ext_gcd(m, f);
        g.is_one().then(|| s.rem(m, f))
    }

    pub fn mulmod(&self, o: &APoly, m: &APoly, f: &Fq) -> APoly {
        self.mul(o, f).rem(m, f)
    }

    pub fn powmod(&self, mut e: u64, m: &APoly, f: &Fq) -> APoly {
        let mut base = self.rem(m, f);
        let mut acc = APoly::one().rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m, f);
            }
        }
        acc
    }

    /// a(T)^q = a(T^q), since the coefficients lie in F_q.
    pub fn frob(&self, f: &Fq) -> APoly {
        let q = f.q() as usize;
        if self.is_zero() {
            return APoly::zero();
        }
        let mut v = vec![0u8; (self.0.len() - 1) * q + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[i * q] = c;
        }
        APoly(v)
    }

    pub fn eval(&self, x: u8, f: &Fq) -> u8 {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Rabin's irreducibility test over F_q.
    pub fn is_irreducible(&self, f: &Fq) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let q = f.q() as u64;
        let x = APoly::t();
        let mut powers = Vec::with_capacity(d + 1);
        let mut h = x.rem(self, f);
        powers.push(h.clone());
        for _ in 0..d {
            h = h.powmod(q, self, f);
            powers.push(h.clone());
        }
        if powers[d] != x.rem(self, f) {
            return false;
        }
        prime_divisors(d as u64).into_iter().all(|r| {
            let hr = powers[d / r as usize].sub(&x, f);
            hr.gcd(self, f).is_one()
        })
    }

    /// Multiplicative order of a unit modulo `m`.
    pub fn order_mod(&self, m: &APoly, f: &Fq) -> Option<u64> {
        let a = self.rem(m, f);
        if a.is_zero() || !a.gcd(m, f).is_one() {
            return None;
        }
        let one = APoly::one().rem(m, f);
        let mut x = a.clone();
        let mut k = 1;
        while x != one {
            x = x.mulmod(&a, m, f);
            k += 1;
        }
        Some(k)
    }

    /// Human-readable form, e.g. `T^2+2T+1`. Coefficients are F_q indices.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            let term = match i {
                0 => coef,
                1 => format!("{coef}T"),
                _ => format!("{coef}T^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }

    /// Parses either the coefficient-list form `1,0,1` or an expression such
    /// as `T^2+1`, `2T+1`, `T*T`. Coefficients must be valid F_q indices.
    pub fn parse(s: &str, f: &Fq) -> Result<APoly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let q = f.q();
        let check = |c: u64| -> Result<u8> {
            if c < q as u64 {
                Ok(c as u8)
            } else {
                Err(Error::Parse(format!("coefficient {c} is not an element of F_{q}")))
            }
        };
        if !s.contains(['T', 't']) {
            let coeffs = s
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("'{t}': {e}"))).and_then(check))
                .collect::<Result<Vec<u8>>>()?;
            return Ok(APoly::from_coeffs(coeffs));
        }
        let mut acc = APoly::zero();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let body = body.replace('*', "");
            let (coef, deg) = match body.find(['T', 't']) {
                None => (check(body.parse::<u64>().map_err(|e| Error::Parse(format!("'{body}': {e}")))?)?, 0),
                Some(pos) => {
                    let c = if pos == 0 { 1 } else { check(body[..pos].parse::<u64>().map_err(|e| Error::Parse(format!("'{body}': {e}")))?)? };
                    let rest = &body[pos + 1..];
                    let d = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("bad term '{body}'")))?
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("'{body}': {e}")))?
                    };
                    (c, d)
                }
            };
            let mut m = APoly::monomial(coef, deg);
            if neg {
                m = m.neg(f);
            }
            acc = acc.add(&m, f);
        }
        Ok(acc)
    }
}

impl fmt::Display for APoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Monic polynomials of degree `d` in canonical order: coefficient vectors
/// `(c_0, ..., c_{d-1})` compared lexicographically, `c_0` first.
fn monic_candidates(q: u8, d: usize, c0: u8) -> impl Iterator<Item = APoly> {
    let mut digits = vec![0u8; d];
    if d > 0 {
        digits[0] = c0;
    }
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut c = digits.clone();
        c.push(1);
        // increment with c_{d-1} varying fastest
        let mut i = d;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
        }
        Some(APoly::from_coeffs(c))
    })
}

/// The first monic irreducible of degree `k` in canonical order.
pub fn canonical_irreducible(f: &Fq, k: usize) -> Result<APoly> {
    if k == 0 {
        return Err(Error::OutOfRange("degree must be positive".into()));
    }
    // for k >= 2 the block with c_0 = 0 is all multiples of T
    monic_candidates(f.q(), k, (k >= 2) as u8)
        .find(|p| p.is_irreducible(f))
        .ok_or_else(|| Error::NotIrreducible(format!("no irreducible of degree {k}")))
}

/// All monic irreducibles of degree `d` over F_q in canonical order.
pub fn irreducibles(f: &Fq, d: usize) -> Result<Vec<APoly>> {
    if d == 0 {
        return Err(Error::OutOfRange("degree must be positive".into()));
    }
    let count = (f.q() as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if count > MAX_ENUMERATION {
        return Err(Error::SizeBound(format!("{count} candidates of degree {d} over F_{}", f.q())));
    }
    Ok(monic_candidates(f.q(), d, 0).filter(|p| p.is_irreducible(f)).collect())
}

/// All monic irreducibles of degree `1..=max_deg`, by degree then canonical order.
pub fn irreducibles_up_to(f: &Fq, max_deg: usize) -> Result<Vec<APoly>> {
    let mut out = Vec::new();
    for d in 1..=max_deg {
        out.extend(irreducibles(f, d)?);
    }
    Ok(out)
}

/// The polynomial ring F_q[T] as a [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    fq: Fq,
}

impl PolyRing {
    pub fn new(fq: Fq) -> Self {
        PolyRing { fq }
    }
    pub fn fq(&self) -> &Fq {
        &self.fq
    }
}

impl Ring for PolyRing {
    type Elem = APoly;
    fn zero(&self) -> APoly {
        APoly::zero()
    }
    fn one(&self) -> APoly {
        APoly::one()
    }
    fn add(&self, a: &APoly, b: &APoly) -> APoly {
        a.add(b, &self.fq)
    }
    fn sub(&self, a: &APoly, b: &APoly) -> APoly {
        a.sub(b, &self.fq)
    }
    fn neg(&self, a: &APoly) -> APoly {
        a.neg(&self.fq)
    }
    fn mul(&self, a: &APoly, b: &APoly) -> APoly {
        a.mul(b, &self.fq)
    }
    fn is_zero(&self, a: &APoly) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &APoly) -> Option<APoly> {
        (a.degree() == Some(0)).then(|| APoly::constant(self.fq.inv(a.lead())))
    }
}

impl FqAlgebra for PolyRing {
    fn base(&self) -> &Fq {
        &self.fq
    }
    fn lift_base(&self, c: u8) -> APoly {
        APoly::constant(c)
    }
    fn frob(&self, a: &APoly) -> APoly {
        a.frob(&self.fq)
    }
    fn scale(&self, c: u8, a: &APoly) -> APoly {
        a.scale(c, &self.fq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mobius(n: u64) -> i64 {
        let ps = prime_divisors(n);
        if ps.iter().any(|p| n.is_multiple_of(p * p)) {
            0
        } else if ps.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// (1/d) sum_{e | d} mu(e) q^(d/e)
    fn necklace(q: u64, d: u64) -> u64 {
        let s: i64 = (1..=d).filter(|e| d.is_multiple_of(*e)).map(|e| mobius(e) * (q as i64).pow((d / e) as u32)).sum();
        (s / d as i64) as u64
    }

    #[test]
    fn irreducibles_small() {
        let f2 = Fq::new(2).unwrap();
        let lin = irreducibles(&f2, 1).unwrap();
        assert_eq!(lin, vec![APoly::t(), APoly::from_coeffs(vec![1, 1])]);
        assert_eq!(irreducibles(&f2, 2).unwrap(), vec![APoly::from_coeffs(vec![1, 1, 1])]);
    }

    #[test]
    fn quadratics_over_f2_by_root_test() {
        let f2 = Fq::new(2).unwrap();
        let irr: Vec<_> =
            (0..4u64).map(|n| APoly::from_coeffs(vec![(n >> 1) as u8, (n & 1) as u8, 1])).filter(|p| (0..2).all(|x| p.eval(x, &f2) != 0)).collect();
        assert_eq!(irr, irreducibles(&f2, 2).unwrap());
    }

    #[test]
    fn counts_match_necklace_formula() {
        for q in [2u64, 3, 4, 5] {
            let f = Fq::new(q).unwrap();
            for d in 1..=8u64 {
                let list = irreducibles(&f, d as usize).unwrap();
                assert_eq!(list.len() as u64, necklace(q, d), "q={q} d={d}");
                let mut sorted = list.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), list.len());
            }
        }
    }

    #[test]
    fn canonical_order_is_low_degree_first() {
        let f3 = Fq::new(3).unwrap();
        let quads = irreducibles(&f3, 2).unwrap();
        let keys: Vec<Vec<u8>> = quads.iter().map(|p| p.coeffs()[..2].to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(quads[0], APoly::from_coeffs(vec![1, 0, 1]));
    }

    #[test]
    fn parse_and_print() {
        let f3 = Fq::new(3).unwrap();
        let p = APoly::parse("T^2+1", &f3).unwrap();
        assert_eq!(p, APoly::from_coeffs(vec![1, 0, 1]));
        assert_eq!(p.to_string(), "1,0,1");
        assert_eq!(APoly::parse("1,0,1", &f3).unwrap(), p);
        assert_eq!(APoly::parse("2T + 1", &f3).unwrap(), APoly::from_coeffs(vec![1, 2]));
        assert_eq!(APoly::parse("T-1", &f3).unwrap(), APoly::from_coeffs(vec![2, 1]));
        assert_eq!(p.to_expr(), "T^2+1");
        assert!(APoly::parse("3T", &f3).is_err());
        assert!(APoly::parse("", &f3).is_err());
    }

    #[test]
    fn order_mod_examples() {
        let f3 = Fq::new(3).unwrap();
        let t = APoly::t();
        // T+2 mod T is 2, of order 2
        assert_eq!(APoly::from_coeffs(vec![2, 1]).order_mod(&t, &f3), Some(2));
        assert_eq!(t.order_mod(&t, &f3), None);
    }

    proptest! {
        #[test]
        fn divrem_identity(a in proptest::collection::vec(0u8..3, 0..10), b in proptest::collection::vec(0u8..3, 1..6)) {
            let f = Fq::new(3).unwrap();
            let a = APoly::from_coeffs(a);
            let b = APoly::from_coeffs(b);
            prop_assume!(!b.is_zero());
            let (qt, r) = a.divrem(&b, &f);
            prop_assert_eq!(qt.mul(&b, &f).add(&r, &f), a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }

        #[test]
        fn ext_gcd_bezout(a in proptest::collection::vec(0u8..4, 0..8), b in proptest::collection::vec(0u8..4, 0..8)) {
            let f = Fq::new(4).unwrap();
            let a = APoly::from_coeffs(a);
            let b = APoly::from_coeffs(b);
            let (g, s, t) = a.ext_gcd(&b, &f);
            prop_assert_eq!(s.mul(&a, &f).add(&t.mul(&b, &f), &f), g.clone());
            prop_assert_eq!(g, a.gcd(&b, &f));
        }
    }
}
