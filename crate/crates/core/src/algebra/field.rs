//! Finite fields: the small base field F_q (table driven, q <= 16) and its
//! extensions F_{q^k} given by a monic irreducible defining polynomial.
//!
//! Elements of F_q are indices `0..q`: the index of `c_0 + c_1 x + ...` over
//! F_p is `c_0 + c_1 p + ...`. Elements of F_{q^k} are coefficient vectors of
//! length `k` over F_q, lowest degree first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::poly::APoly;
use crate::algebra::ring::{FqAlgebra, Ring};
use crate::error::{Error, Result};

/// Largest supported base field.
pub const MAX_Q: u64 = 16;
/// Largest supported extension field, in bits of `q^k`.
pub const MAX_FIELD_BITS: f64 = 256.0;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `q = p^s` with `p` prime, if any.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut s = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        s += 1;
    }
    Some((p, s))
}

struct FqInner {
    p: u8,
    s: u8,
    q: u8,
    /// Defining polynomial over F_p (the identity `x` when `s = 1`).
    modulus: APoly,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// The base field F_q, q = p^s <= 16.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
    }
}
impl Eq for Fq {}

fn fq_cache() -> &'static Mutex<HashMap<u64, Fq>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Fq>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq> {
        if let Some(f) = fq_cache().lock().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::SizeBound(format!("q = {q} exceeds {MAX_Q}")));
        }
        let f = if s == 1 {
            Fq::prime(p as u8)
        } else {
            let fp = Fq::prime(p as u8);
            let modulus = crate::algebra::poly::canonical_irreducible(&fp, s as usize)?;
            Fq::extension_of_prime(&fp, modulus)
        };
        fq_cache().lock().unwrap().insert(q, f.clone());
        Ok(f)
    }

    fn prime(p: u8) -> Fq {
        let n = p as usize;
        let mut add = vec![0u8; n * n];
        let mut sub = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u8;
                sub[a * n + b] = ((a + n - b) % n) as u8;
                mul[a * n + b] = ((a * b) % n) as u8;
            }
        }
        Fq::finish(p, 1, APoly::from_coeffs(vec![0, 1]), add, sub, mul)
    }

    fn extension_of_prime(fp: &Fq, modulus: APoly) -> Fq {
        let p = fp.p() as usize;
        let s = modulus.degree().unwrap();
        let n = p.pow(s as u32);
        let digits = |mut x: usize| -> APoly {
            let mut v = Vec::with_capacity(s);
            for _ in 0..s {
                v.push((x % p) as u8);
                x /= p;
            }
            APoly::from_coeffs(v)
        };
        let index = |a: &APoly| -> usize { a.coeffs().iter().rev().fold(0, |acc, &c| acc * p + c as usize) };
        let elems: Vec<APoly> = (0..n).map(digits).collect();
        let mut add = vec![0u8; n * n];
        let mut sub = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = index(&elems[a].add(&elems[b], fp)) as u8;
                sub[a * n + b] = index(&elems[a].sub(&elems[b], fp)) as u8;
                mul[a * n + b] = index(&elems[a].mul(&elems[b], fp).rem(&modulus, fp)) as u8;
            }
        }
        Fq::finish(fp.p(), s as u8, modulus, add, sub, mul)
    }

    fn finish(p: u8, s: u8, modulus: APoly, add: Vec<u8>, sub: Vec<u8>, mul: Vec<u8>) -> Fq {
        let n = (p as usize).pow(s as u32);
        let neg = (0..n).map(|a| sub[a]).collect();
        let mut inv = vec![0u8; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8;
        }
        Fq(Arc::new(FqInner { p, s, q: n as u8, modulus, add, sub, mul, neg, inv }))
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.0.q
    }
    #[inline]
    pub fn p(&self) -> u8 {
        self.0.p
    }
    #[inline]
    pub fn s(&self) -> u8 {
        self.0.s
    }
    /// Defining polynomial of F_q over F_p (coefficients are F_p values).
    pub fn modulus(&self) -> &APoly {
        &self.0.modulus
    }
    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.0.sub[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }
    /// Inverse of a nonzero element; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.0.inv[a as usize]
    }
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q()
    }
}

impl Ring for Fq {
    type Elem = u8;
    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: &u8, b: &u8) -> u8 {
        Fq::add(self, *a, *b)
    }
    fn sub(&self, a: &u8, b: &u8) -> u8 {
        Fq::sub(self, *a, *b)
    }
    fn neg(&self, a: &u8) -> u8 {
        Fq::neg(self, *a)
    }
    fn mul(&self, a: &u8, b: &u8) -> u8 {
        Fq::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }
    fn try_inv(&self, a: &u8) -> Option<u8> {
        (*a != 0).then(|| self.inv(*a))
    }
}

impl FqAlgebra for Fq {
    fn base(&self) -> &Fq {
        self
    }
    fn lift_base(&self, c: u8) -> u8 {
        c
    }
    fn frob(&self, a: &u8) -> u8 {
        *a
    }
}

/// Element of an extension field: `k` coefficients over F_q, lowest first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FieldElem(pub Vec<u8>);

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

struct ExtInner {
    fq: Fq,
    k: usize,
    modulus: APoly,
    frob: OnceLock<Vec<FieldElem>>,
}

/// F_{q^k} = F_q[x]/(modulus).
#[derive(Clone)]
pub struct ExtField(Arc<ExtInner>);

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod [{}]", self.fq().q(), self.degree(), self.modulus())
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.fq() == other.fq() && self.modulus() == other.modulus())
    }
}
impl Eq for ExtField {}

/// Descriptor of F_{q^k}, q = p^s, with the canonical defining polynomial.
/// Results are cached, so equal inputs return the same handle.
pub fn canonical_field(p: u64, s: u32, k: usize) -> Result<ExtField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if s == 0 || k == 0 {
        return Err(Error::OutOfRange("s and k must be positive".into()));
    }
    let q = p.checked_pow(s).filter(|&q| q <= MAX_Q).ok_or_else(|| Error::SizeBound(format!("q = {p}^{s} exceeds {MAX_Q}")))?;
    let bits = (s as f64) * (k as f64) * (p as f64).log2();
    if bits > MAX_FIELD_BITS {
        return Err(Error::SizeBound(format!("F_{q}^{k} exceeds 2^{MAX_FIELD_BITS}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), ExtField>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(q, k)) {
        return Ok(f.clone());
    }
    let fq = Fq::new(q)?;
    let modulus = crate::algebra::poly::canonical_irreducible(&fq, k)?;
    let field = ExtField::from_modulus_unchecked(fq, modulus);
    Ok(cache.lock().unwrap().entry((q, k)).or_insert(field).clone())
}

impl ExtField {
    /// F_q[x]/(modulus) for a monic irreducible `modulus`.
    pub fn from_modulus(fq: Fq, modulus: APoly) -> Result<ExtField> {
        if !modulus.is_monic() || !modulus.is_irreducible(&fq) {
            return Err(Error::NotIrreducible(modulus.to_string()));
        }
        Ok(Self::from_modulus_unchecked(fq, modulus))
    }

    pub(crate) fn from_modulus_unchecked(fq: Fq, modulus: APoly) -> ExtField {
        let k = modulus.degree().unwrap();
        ExtField(Arc::new(ExtInner { fq, k, modulus, frob: OnceLock::new() }))
    }

    pub fn fq(&self) -> &Fq {
        &self.0.fq
    }
    pub fn degree(&self) -> usize {
        self.0.k
    }
    pub fn modulus(&self) -> &APoly {
        &self.0.modulus
    }
    /// Field size when it fits in a u128.
    pub fn size(&self) -> Option<u128> {
        (self.fq().q() as u128).checked_pow(self.degree() as u32)
    }

    pub fn elem(&self, coeffs: &[u8]) -> FieldElem {
        let mut v = vec![0u8; self.degree()];
        for (i, &c) in coeffs.iter().enumerate() {
            if i < v.len() {
                v[i] = c;
            } else {
                let r = APoly::from_coeffs(coeffs.to_vec()).rem(self.modulus(), self.fq());
                return self.from_apoly(&r);
            }
        }
        FieldElem(v)
    }

    pub fn from_apoly(&self, a: &APoly) -> FieldElem {
        let r = a.rem(self.modulus(), self.fq());
        let mut v = r.coeffs().to_vec();
        v.resize(self.degree(), 0);
        FieldElem(v)
    }

    pub fn to_apoly(&self, a: &FieldElem) -> APoly {
        APoly::from_coeffs(a.0.clone())
    }

    /// The class of `x`, a root of the defining polynomial.
    pub fn generator(&self) -> FieldElem {
        self.elem(&[0, 1])
    }

    /// Element with index `n` (base-q digits, lowest first).
    pub fn from_index(&self, mut n: u128) -> FieldElem {
        let q = self.fq().q() as u128;
        let mut v = vec![0u8; self.degree()];
        for c in v.iter_mut() {
            *c = (n % q) as u8;
            n /= q;
        }
        FieldElem(v)
    }

    pub fn index_of(&self, a: &FieldElem) -> u128 {
        let q = self.fq().q() as u128;
        a.0.iter().rev().fold(0u128, |acc, &c| acc * q + c as u128)
    }

    /// All elements in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let n = self.size().expect("field too large to enumerate");
        (0..n).map(move |i| self.from_index(i))
    }

    fn frob_images(&self) -> &[FieldElem] {
        self.0.frob.get_or_init(|| {
            let q = self.fq().q() as u64;
            (0..self.degree())
                .map(|j| {
                    let mut e = vec![0u8; self.degree()];
                    e[j] = 1;
                    self.pow(&FieldElem(e), q)
                })
                .collect()
        })
    }

    /// x -> x^(q^i).
    pub fn frob_pow(&self, a: &FieldElem, i: usize) -> FieldElem {
        let mut x = a.clone();
        for _ in 0..i {
            x = self.frob(&x);
        }
        x
    }

    /// Coordinates of `a` (identity: elements are stored as coordinates).
    pub fn coords<'a>(&self, a: &'a FieldElem) -> &'a [u8] {
        &a.0
    }

    /// Minimal polynomial of `a` over F_q.
    pub fn min_poly(&self, a: &FieldElem) -> APoly {
        let mut conj = vec![a.clone()];
        loop {
            let next = self.frob(conj.last().unwrap());
            if next == *a {
                break;
            }
            conj.push(next);
        }
        // prod (X - c) with coefficients in F_{q^k}, which land in F_q
        let mut acc: Vec<FieldElem> = vec![self.one()];
        for c in &conj {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, a_i) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], a_i);
                let t = self.mul(a_i, c);
                next[i] = self.sub(&next[i], &t);
            }
            acc = next;
        }
        APoly::from_coeffs(acc.iter().map(|e| e.0[0]).collect())
    }
}

impl Ring for ExtField {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.degree()])
    }
    fn one(&self) -> FieldElem {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        FieldElem(v)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let f = self.fq();
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let f = self.fq();
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        let f = self.fq();
        FieldElem(a.0.iter().map(|&x| f.neg(x)).collect())
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let f = self.fq();
        let k = self.degree();
        if k == 1 {
            return FieldElem(vec![f.mul(a.0[0], b.0[0])]);
        }
        let mut buf = vec![0u8; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    buf[i + j] = f.add(buf[i + j], f.mul(x, y));
                }
            }
        }
        let m = self.modulus().coeffs();
        for i in (k..2 * k - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                if m[j] != 0 {
                    buf[i - k + j] = f.sub(buf[i - k + j], f.mul(c, m[j]));
                }
            }
        }
        buf.truncate(k);
        FieldElem(buf)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn try_inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(a) {
            return None;
        }
        let inv = self.to_apoly(a).inv_mod(self.modulus(), self.fq())?;
        Some(self.from_apoly(&inv))
    }
}

impl FqAlgebra for ExtField {
    fn base(&self) -> &Fq {
        self.fq()
    }
    fn lift_base(&self, c: u8) -> FieldElem {
        let mut v = vec![0; self.degree()];
        v[0] = c;
        FieldElem(v)
    }
    fn frob(&self, a: &FieldElem) -> FieldElem {
        let f = self.fq();
        let imgs = self.frob_images();
        let mut out = vec![0u8; self.degree()];
        for (j, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&imgs[j].0) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        FieldElem(out)
    }
    fn scale(&self, c: u8, a: &FieldElem) -> FieldElem {
        let f = self.fq();
        FieldElem(a.0.iter().map(|&x| f.mul(c, x)).collect())
    }
}

/// A field homomorphism F_q[x]/(m) -> target, fixed by the image of `x`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub source: ExtField,
    pub target: ExtField,
    pub generator_image: FieldElem,
}

impl FieldEmbedding {
    pub fn identity(field: &ExtField) -> Self {
        FieldEmbedding { source: field.clone(), target: field.clone(), generator_image: field.generator() }
    }

    pub fn apply(&self, a: &FieldElem) -> FieldElem {
        let t = &self.target;
        let mut acc = t.zero();
        for &c in a.0.iter().rev() {
            acc = t.mul(&acc, &self.generator_image);
            acc = t.add(&acc, &t.lift_base(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(6), None);
        assert!(Fq::new(6).is_err());
        assert!(matches!(Fq::new(32), Err(Error::SizeBound(_))));
    }

    #[test]
    fn canonical_small_fields() {
        let f2 = canonical_field(2, 1, 1).unwrap();
        assert_eq!(f2.degree(), 1);
        assert_eq!(f2.size(), Some(2));
        let f4 = canonical_field(2, 1, 2).unwrap();
        assert_eq!(f4.modulus().coeffs(), &[1, 1, 1]);
        let f9 = canonical_field(3, 1, 2).unwrap();
        // x^2 + 1: first irreducible in low-degree-first order
        assert_eq!(f9.modulus().coeffs(), &[1, 0, 1]);
        assert!(canonical_field(4, 1, 2).is_err());
        assert!(canonical_field(2, 1, 300).is_err());
        let again = canonical_field(3, 1, 2).unwrap();
        assert_eq!(again, f9);
    }

    #[test]
    fn f9_modulus_is_first_irreducible_by_brute_force() {
        // (c0, c1) in lexicographic order, c0 most significant
        let fp = Fq::new(3).unwrap();
        let first = (0..9u8)
            .map(|n| [n / 3, n % 3])
            .find(|c| {
                (0..3u8).all(|x| {
                    let v = fp.add(fp.add(c[0], fp.mul(c[1], x)), fp.mul(x, x));
                    v != 0
                })
            })
            .unwrap();
        assert_eq!(first, [1, 0]);
    }

    #[test]
    fn non_prime_base_field_tables() {
        let f4 = Fq::new(4).unwrap();
        for a in 1..4 {
            assert_eq!(f4.mul(a, f4.inv(a)), 1);
        }
        // x * x = x + 1 -> index 3
        assert_eq!(f4.mul(2, 2), 3);
        let f16 = Fq::new(16).unwrap();
        for a in 1..16 {
            assert_eq!(f16.mul(a, f16.inv(a)), 1);
        }
    }

    fn field_axioms(field: &ExtField, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.fq().q();
        let mut rand_elem = || FieldElem((0..field.degree()).map(|_| rng.gen_range(0..q)).collect());
        for _ in 0..1000 {
            let (a, b, c) = (rand_elem(), rand_elem(), rand_elem());
            assert_eq!(field.mul(&field.mul(&a, &b), &c), field.mul(&a, &field.mul(&b, &c)));
            assert_eq!(field.mul(&a, &field.add(&b, &c)), field.add(&field.mul(&a, &b), &field.mul(&a, &c)));
            if !field.is_zero(&a) {
                assert!(field.is_one(&field.mul(&a, &field.try_inv(&a).unwrap())));
            }
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        for (p, s, k) in [(2, 1, 3), (2, 1, 8), (3, 1, 4), (2, 2, 3), (3, 2, 2), (5, 1, 3), (2, 4, 2)] {
            field_axioms(&canonical_field(p, s, k).unwrap(), p * 100 + k as u64);
        }
    }

    #[test]
    fn frobenius_is_additive_exhaustively() {
        for (p, s, k) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (3, 1, 4), (2, 1, 6), (5, 1, 2), (3, 2, 2)] {
            let field = canonical_field(p, s, k).unwrap();
            assert!(field.size().unwrap() <= 81);
            let elems: Vec<_> = field.elements().collect();
            for x in &elems {
                for y in &elems {
                    assert_eq!(field.frob(&field.add(x, y)), field.add(&field.frob(x), &field.frob(y)));
                }
            }
        }
    }

    #[test]
    fn frob_matches_power() {
        let field = canonical_field(3, 1, 5).unwrap();
        let a = field.elem(&[1, 2, 0, 1, 1]);
        assert_eq!(field.frob(&a), field.pow(&a, 3));
        assert_eq!(field.frob_pow(&a, 5), a);
    }

    #[test]
    fn min_poly_of_generator_is_modulus() {
        let field = canonical_field(2, 1, 5).unwrap();
        assert_eq!(field.min_poly(&field.generator()), *field.modulus());
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let fq = Fq::new(2).unwrap();
        let small = ExtField::from_modulus(fq, APoly::from_coeffs(vec![1, 1, 1])).unwrap();
        let big = canonical_field(2, 1, 4).unwrap();
        // find a root of x^2+x+1 in F_16 by search
        let root = big
            .elements()
            .find(|y| {
                let v = big.add(&big.add(&big.mul(y, y), y), &big.one());
                big.is_zero(&v)
            })
            .unwrap();
        let emb = FieldEmbedding { source: small.clone(), target: big.clone(), generator_image: root };
        let elems: Vec<_> = small.elements().collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(emb.apply(&small.mul(a, b)), big.mul(&emb.apply(a), &emb.apply(b)));
                assert_eq!(emb.apply(&small.add(a, b)), big.add(&emb.apply(a), &emb.apply(b)));
            }
        }
    }
}
