//! Quotient rings A/I of A = F_q[T], with extra structure when I = P^n.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::field::Fq;
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::APoly;
use crate::algebra::ring::{FqAlgebra, Ring};
use crate::error::{Error, Result};

/// Elements of A/I are reduced residues.
pub type QuotElem = APoly;

struct QuotInner {
    fq: Fq,
    modulus: APoly,
    local: Option<(PrimeIdeal, u32)>,
}

/// A/I for a monic nonconstant generator of I.
#[derive(Clone)]
pub struct QuotRing(Arc<QuotInner>);

impl fmt::Debug for QuotRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.local {
            Some((p, n)) => write!(f, "A/({})^{} over F_{}", p.generator().to_expr(), n, self.fq().q()),
            None => write!(f, "A/({}) over F_{}", self.modulus().to_expr(), self.fq().q()),
        }
    }
}

impl PartialEq for QuotRing {
    fn eq(&self, other: &Self) -> bool {
        self.fq() == other.fq() && self.modulus() == other.modulus()
    }
}
impl Eq for QuotRing {}

impl QuotRing {
    pub fn new(fq: Fq, modulus: APoly) -> Result<QuotRing> {
        if !modulus.is_monic() || modulus.is_constant() {
            return Err(Error::OutOfRange(format!("modulus {} must be monic of positive degree", modulus.to_expr())));
        }
        Ok(QuotRing(Arc::new(QuotInner { fq, modulus, local: None })))
    }

    /// A/P^n.
    pub fn prime_power(fq: Fq, prime: &PrimeIdeal, n: u32) -> Result<QuotRing> {
        if n == 0 {
            return Err(Error::OutOfRange("level must be at least 1".into()));
        }
        if fq.q() != prime.q() {
            return Err(Error::Mismatch("prime over a different base field".into()));
        }
        let modulus = prime.generator().pow(n as u64, &fq);
        Ok(QuotRing(Arc::new(QuotInner { fq, modulus, local: Some((prime.clone(), n)) })))
    }

    pub fn fq(&self) -> &Fq {
        &self.0.fq
    }
    pub fn modulus(&self) -> &APoly {
        &self.0.modulus
    }
    pub fn prime(&self) -> Option<&PrimeIdeal> {
        self.0.local.as_ref().map(|(p, _)| p)
    }
    pub fn level(&self) -> Option<u32> {
        self.0.local.as_ref().map(|(_, n)| *n)
    }
    /// Residue degree bound: elements have degree < this.
    pub fn width(&self) -> usize {
        self.modulus().degree().unwrap()
    }
    pub fn size(&self) -> u128 {
        (self.fq().q() as u128).pow(self.width() as u32)
    }
    pub fn is_field(&self) -> bool {
        self.level() == Some(1)
    }

    pub fn reduce(&self, a: &APoly) -> QuotElem {
        a.rem(self.modulus(), self.fq())
    }

    pub fn elem_from_index(&self, n: u64) -> QuotElem {
        APoly::from_index(n, self.fq().q())
    }
    pub fn index_of(&self, a: &QuotElem) -> u64 {
        a.index(self.fq().q())
    }

    /// All residues in index order.
    pub fn elements(&self) -> impl Iterator<Item = QuotElem> + '_ {
        let n = self.size() as u64;
        (0..n).map(move |i| self.elem_from_index(i))
    }

    pub fn units(&self) -> Vec<QuotElem> {
        self.elements().filter(|a| self.is_unit(a)).collect()
    }

    /// Uniform residue.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> QuotElem {
        let q = self.fq().q();
        APoly::from_coeffs((0..self.width()).map(|_| rng.gen_range(0..q)).collect())
    }

    pub fn is_unit(&self, a: &QuotElem) -> bool {
        match self.prime() {
            Some(p) => !a.rem(p.generator(), self.fq()).is_zero(),
            None => a.gcd(self.modulus(), self.fq()).is_one(),
        }
    }

    pub fn inv(&self, a: &QuotElem) -> Result<QuotElem> {
        a.inv_mod(self.modulus(), self.fq()).ok_or_else(|| Error::NonUnit(a.to_expr()))
    }

    /// P-adic valuation of a residue in A/P^n; `n` for zero.
    pub fn valuation(&self, a: &QuotElem) -> u32 {
        self.split_unit(a).0
    }

    /// `a = P^v * u` with `u` a unit (for `a = 0`: `(n, 0)`).
    pub fn split_unit(&self, a: &QuotElem) -> (u32, QuotElem) {
        let (p, n) = self.0.local.as_ref().expect("valuation needs a prime-power modulus");
        let f = self.fq();
        if a.is_zero() {
            return (*n, APoly::zero());
        }
        let mut v = 0;
        let mut x = a.clone();
        loop {
            let (qt, r) = x.divrem(p.generator(), f);
            if !r.is_zero() {
                return (v, x);
            }
            x = qt;
            v += 1;
        }
    }

    /// The residue field A/P of a local ring A/P^n.
    pub fn residue_field(&self) -> Result<QuotRing> {
        let p = self.prime().ok_or_else(|| Error::Mismatch("not a prime-power quotient".into()))?;
        QuotRing::prime_power(self.fq().clone(), p, 1)
    }

    /// Image of `a` in `target`, whose modulus must divide this one.
    pub fn project(&self, target: &QuotRing, a: &QuotElem) -> QuotElem {
        target.reduce(a)
    }

    pub fn project_matrix(&self, target: &QuotRing, m: &Matrix<QuotElem>) -> Matrix<QuotElem> {
        m.map(|x| target.reduce(x))
    }

    pub fn random_matrix<R: Rng + ?Sized>(&self, r: usize, rng: &mut R) -> Matrix<QuotElem> {
        Matrix::from_fn(r, r, |_, _| self.random(rng))
    }
}

impl Ring for QuotRing {
    type Elem = QuotElem;
    fn zero(&self) -> QuotElem {
        APoly::zero()
    }
    fn one(&self) -> QuotElem {
        APoly::one()
    }
    fn add(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        a.add(b, self.fq())
    }
    fn sub(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        a.sub(b, self.fq())
    }
    fn neg(&self, a: &QuotElem) -> QuotElem {
        a.neg(self.fq())
    }
    fn mul(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        a.mulmod(b, self.modulus(), self.fq())
    }
    fn is_zero(&self, a: &QuotElem) -> bool {
        a.is_zero()
    }
    fn try_inv(&self, a: &QuotElem) -> Option<QuotElem> {
        a.inv_mod(self.modulus(), self.fq())
    }
}

impl FqAlgebra for QuotRing {
    fn base(&self) -> &Fq {
        self.fq()
    }
    fn lift_base(&self, c: u8) -> QuotElem {
        APoly::constant(c)
    }
    fn scale(&self, c: u8, a: &QuotElem) -> QuotElem {
        a.scale(c, self.fq())
    }
}

/// Chinese remainder isomorphism A/IJ -> A/I x A/J for coprime I, J.
#[derive(Clone, Debug)]
pub struct Crt {
    pub product: QuotRing,
    pub left: QuotRing,
    pub right: QuotRing,
    left_inv_mod_right: APoly,
}

impl Crt {
    pub fn new(left: &QuotRing, right: &QuotRing) -> Result<Crt> {
        let f = left.fq();
        let (i, j) = (left.modulus(), right.modulus());
        let left_inv_mod_right = i.inv_mod(j, f).ok_or_else(|| Error::NotCoprime(i.to_expr(), j.to_expr()))?;
        let product = QuotRing::new(f.clone(), i.mul(j, f))?;
        Ok(Crt { product, left: left.clone(), right: right.clone(), left_inv_mod_right })
    }

    pub fn split(&self, x: &QuotElem) -> (QuotElem, QuotElem) {
        (self.left.reduce(x), self.right.reduce(x))
    }

    /// x = a + I * ((b - a) I^-1 mod J)
    pub fn join(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        let f = self.product.fq();
        let t = self.right.mul(&self.right.sub(b, &self.right.reduce(a)), &self.left_inv_mod_right);
        self.product.reduce(&a.add(&self.left.modulus().mul(&t, f), f))
    }

    pub fn split_matrix(&self, m: &Matrix<QuotElem>) -> (Matrix<QuotElem>, Matrix<QuotElem>) {
        (m.map(|x| self.left.reduce(x)), m.map(|x| self.right.reduce(x)))
    }

    pub fn join_matrix(&self, a: &Matrix<QuotElem>, b: &Matrix<QuotElem>) -> Result<Matrix<QuotElem>> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Mismatch("CRT components of different shapes".into()));
        }
        Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| self.join(a.get(i, j), b.get(i, j))))
    }
}
