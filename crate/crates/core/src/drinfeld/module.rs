//! Drinfeld A-modules phi: A -> L{tau}, determined by phi_T.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::algebra::field::{ExtField, FieldElem, FieldEmbedding, Fq};
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::poly::{APoly, PolyRing};
use crate::algebra::ring::FqAlgebra;
use crate::drinfeld::spec::ModuleSpec;
use crate::drinfeld::twisted::{tw_add, tw_mul, TwistedPoly};
use crate::error::{Error, Result};

/// A Drinfeld module over the A-field described by `ring` and `gamma_t`.
///
/// In generic characteristic the ring is A itself (coefficients restricted to
/// A, gamma the inclusion). In finite characteristic the ring is a finite
/// field L and `char_place` is the kernel of gamma.
pub struct DrinfeldModule<R: FqAlgebra> {
    ring: R,
    phi_t: TwistedPoly<R::Elem>,
    char_place: Option<PrimeIdeal>,
    cache: RwLock<HashMap<APoly, Arc<TwistedPoly<R::Elem>>>>,
}

pub type GenericModule = DrinfeldModule<PolyRing>;
pub type FiniteModule = DrinfeldModule<ExtField>;

impl<R: FqAlgebra> Clone for DrinfeldModule<R> {
    fn clone(&self) -> Self {
        DrinfeldModule {
            ring: self.ring.clone(),
            phi_t: self.phi_t.clone(),
            char_place: self.char_place.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl<R: FqAlgebra + fmt::Debug> fmt::Debug for DrinfeldModule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DrinfeldModule").field("ring", &self.ring).field("phi_t", &self.phi_t).field("char_place", &self.char_place).finish()
    }
}

impl<R: FqAlgebra> DrinfeldModule<R> {
    /// `phi_t = [gamma(T), g_1, ..., g_r]` with `g_r != 0`, `r >= 1`.
    pub fn new(ring: R, phi_t: Vec<R::Elem>, char_place: Option<PrimeIdeal>) -> Result<Self> {
        if phi_t.len() < 2 {
            return Err(Error::OutOfRange("phi_T needs at least one tau coefficient".into()));
        }
        if ring.is_zero(phi_t.last().unwrap()) {
            return Err(Error::OutOfRange("leading coefficient g_r must be nonzero".into()));
        }
        let phi_t = TwistedPoly::new(&ring, phi_t);
        Ok(DrinfeldModule { ring, phi_t, char_place, cache: RwLock::new(HashMap::new()) })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn fq(&self) -> &Fq {
        self.ring.base()
    }
    pub fn phi_t(&self) -> &TwistedPoly<R::Elem> {
        &self.phi_t
    }
    /// gamma(T) = D(phi_T).
    pub fn gamma_t(&self) -> R::Elem {
        self.phi_t.constant_term(&self.ring)
    }
    pub fn char_place(&self) -> Option<&PrimeIdeal> {
        self.char_place.as_ref()
    }
    pub fn is_generic(&self) -> bool {
        self.char_place.is_none()
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().unwrap()
    }

    /// gamma(a) = a(gamma(T)).
    pub fn gamma(&self, a: &APoly) -> R::Elem {
        let g = self.gamma_t();
        a.coeffs().iter().rev().fold(self.ring.zero(), |acc, &c| self.ring.add(&self.ring.mul(&acc, &g), &self.ring.lift_base(c)))
    }

    /// phi_a, by Horner's rule over the coefficients of `a`; memoised.
    pub fn phi_of(&self, a: &APoly) -> Arc<TwistedPoly<R::Elem>> {
        if let Some(v) = self.cache.read().unwrap().get(a) {
            return v.clone();
        }
        let ring = &self.ring;
        let mut acc = TwistedPoly::zero();
        for &c in a.coeffs().iter().rev() {
            acc = tw_mul(ring, &acc, &self.phi_t);
            acc = tw_add(ring, &acc, &TwistedPoly::constant(ring, ring.lift_base(c)));
        }
        let acc = Arc::new(acc);
        self.cache.write().unwrap().entry(a.clone()).or_insert(acc).clone()
    }

    pub fn cached_count(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

impl GenericModule {
    /// phi_T = T + g_1 tau + ... + g_r tau^r with coefficients in A.
    pub fn generic(fq: Fq, g: Vec<APoly>) -> Result<Self> {
        let mut coeffs = vec![APoly::t()];
        coeffs.extend(g);
        DrinfeldModule::new(PolyRing::new(fq), coeffs, None)
    }

    /// The Carlitz module phi_T = T + tau.
    pub fn carlitz(fq: Fq) -> Self {
        Self::generic(fq, vec![APoly::one()]).unwrap()
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<Self> {
        let fq = Fq::new(spec.q)?;
        if spec.phi_t.first() != Some(&APoly::t()) {
            return Err(Error::Parse("generic characteristic requires D(phi_T) = T".into()));
        }
        if spec.phi_t.len() != spec.r + 1 {
            return Err(Error::Parse(format!("r = {} but {} tau coefficients given", spec.r, spec.phi_t.len() - 1)));
        }
        Self::generic(fq, spec.phi_t[1..].to_vec())
    }

    pub fn spec(&self) -> ModuleSpec {
        ModuleSpec { q: self.fq().q() as u64, r: self.rank(), phi_t: self.phi_t().coeffs().to_vec() }
    }

    /// Reduction at a place of good reduction: a module over A/ell with
    /// gamma(T) = T mod ell.
    pub fn reduce_at_place(&self, place: &PrimeIdeal) -> Result<FiniteModule> {
        let fq = self.fq().clone();
        let ell = place.generator();
        let lead = self.phi_t().leading().unwrap();
        if ell.divides(lead, &fq) {
            return Err(Error::BadReduction(ell.to_expr()));
        }
        let field = ExtField::from_modulus(fq, ell.clone())?;
        let coeffs: Vec<FieldElem> = self.phi_t().coeffs().iter().map(|c| field.from_apoly(c)).collect();
        DrinfeldModule::new(field, coeffs, Some(place.clone()))
    }

    pub fn has_good_reduction(&self, place: &PrimeIdeal) -> bool {
        !place.generator().divides(self.phi_t().leading().unwrap(), self.fq())
    }
}

impl FiniteModule {
    pub fn field(&self) -> &ExtField {
        self.ring()
    }

    /// The same module over a larger field.
    pub fn base_change(&self, emb: &FieldEmbedding) -> Result<FiniteModule> {
        if emb.source != *self.field() {
            return Err(Error::Mismatch("embedding source is not the module's field".into()));
        }
        let coeffs = self.phi_t().coeffs().iter().map(|c| emb.apply(c)).collect();
        DrinfeldModule::new(emb.target.clone(), coeffs, self.char_place.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::canonical_field;
    use crate::algebra::ring::Ring;
    use crate::drinfeld::twisted::{tw_eval, tw_sub};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_a(rng: &mut ChaCha8Rng, q: u8, max_deg: usize) -> APoly {
        let d = rng.gen_range(0..=max_deg);
        APoly::from_coeffs((0..=d).map(|_| rng.gen_range(0..q)).collect())
    }

    fn finite_modules() -> Vec<FiniteModule> {
        let mut out = Vec::new();
        for (q, g, place) in [
            (2u64, vec!["1"], "T^3+T+1"),
            (3, vec!["1"], "T^2+1"),
            (2, vec!["1", "T"], "T^2+T+1"),
            (3, vec!["T+1", "2"], "T^3+2T+1"),
            (2, vec!["T", "1", "T+1"], "T^4+T+1"),
            (4, vec!["1", "2T"], "T+2"),
        ] {
            let fq = Fq::new(q).unwrap();
            let g = g.iter().map(|s| APoly::parse(s, &fq).unwrap()).collect();
            let m = GenericModule::generic(fq.clone(), g).unwrap();
            out.push(m.reduce_at_place(&PrimeIdeal::parse(place, &fq).unwrap()).unwrap());
        }
        out
    }

    #[test]
    fn phi_of_t_and_constants() {
        let fq = Fq::new(3).unwrap();
        let m = GenericModule::carlitz(fq.clone());
        assert_eq!(*m.phi_of(&APoly::t()), *m.phi_t());
        let c = m.phi_of(&APoly::constant(2));
        assert_eq!(c.coeffs(), &[APoly::constant(2)]);
        assert!(m.phi_of(&APoly::zero()).is_zero());
    }

    #[test]
    fn carlitz_t_squared() {
        let k = canonical_field(2, 1, 5).unwrap();
        let th = k.generator();
        let m = DrinfeldModule::new(k.clone(), vec![th.clone(), k.one()], None).unwrap();
        let t2 = m.phi_of(&APoly::parse("T^2", k.fq()).unwrap());
        let expect = TwistedPoly::new(&k, vec![k.mul(&th, &th), k.add(&th, &k.frob(&th)), k.one()]);
        assert_eq!(*t2, expect);
        assert_eq!(*t2, tw_mul(&k, m.phi_t(), m.phi_t()));
    }

    #[test]
    fn generic_carlitz_t_squared() {
        let fq = Fq::new(3).unwrap();
        let m = GenericModule::carlitz(fq.clone());
        let t2 = m.phi_of(&APoly::parse("T^2", &fq).unwrap());
        // T^2 + (T + T^3) tau + tau^2
        let expect: Vec<APoly> = ["T^2", "T^3+T", "1"].iter().map(|s| APoly::parse(s, &fq).unwrap()).collect();
        assert_eq!(t2.coeffs(), expect.as_slice());
    }

    #[test]
    fn homomorphism_laws_on_finite_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for m in finite_modules() {
            let ring = m.field().clone();
            let q = m.fq().q();
            for _ in 0..100 {
                let a = random_a(&mut rng, q, 5);
                let b = random_a(&mut rng, q, 5);
                let sum = m.phi_of(&a.add(&b, m.fq()));
                assert_eq!(*sum, tw_add(&ring, &m.phi_of(&a), &m.phi_of(&b)));
                let ab = a.mul(&b, m.fq());
                let pab = m.phi_of(&ab);
                assert_eq!(*pab, tw_mul(&ring, &m.phi_of(&a), &m.phi_of(&b)));
                assert_eq!(*pab, tw_mul(&ring, &m.phi_of(&b), &m.phi_of(&a)));
                assert_eq!(pab.constant_term(&ring), m.gamma(&ab));
                let expect_deg = ab.degree().map(|d| d * m.rank());
                assert_eq!(pab.degree(), expect_deg);
            }
        }
    }

    #[test]
    fn homomorphism_laws_on_generic_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fq = Fq::new(2).unwrap();
        let ring = PolyRing::new(fq.clone());
        for g in [vec!["1"], vec!["1", "T"], vec!["T", "T+1"]] {
            let g = g.iter().map(|s| APoly::parse(s, &fq).unwrap()).collect();
            let m = GenericModule::generic(fq.clone(), g).unwrap();
            for _ in 0..30 {
                let a = random_a(&mut rng, 2, 2);
                let b = random_a(&mut rng, 2, 2);
                let ab = a.mul(&b, &fq);
                assert_eq!(*m.phi_of(&ab), tw_mul(&ring, &m.phi_of(&a), &m.phi_of(&b)));
                assert_eq!(tw_sub(&ring, &m.phi_of(&a.add(&b, &fq)), &tw_add(&ring, &m.phi_of(&a), &m.phi_of(&b))), TwistedPoly::zero());
                assert_eq!(m.phi_of(&ab).constant_term(&ring), ab);
            }
        }
    }

    #[test]
    fn rank_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for m in finite_modules() {
            assert!((1..=3).contains(&m.rank()));
            for _ in 0..50 {
                let a = random_a(&mut rng, m.fq().q(), 6);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(m.phi_of(&a).degree(), Some(m.rank() * a.deg0()));
            }
        }
    }

    #[test]
    fn reductions() {
        let f2 = Fq::new(2).unwrap();
        let c = GenericModule::carlitz(f2.clone());
        let at_t = c.reduce_at_place(&PrimeIdeal::parse("T", &f2).unwrap()).unwrap();
        assert_eq!(at_t.field().degree(), 1);
        assert!(at_t.field().is_zero(&at_t.gamma_t()));
        assert_eq!(at_t.rank(), 1);
        let at_q = c.reduce_at_place(&PrimeIdeal::parse("T^2+T+1", &f2).unwrap()).unwrap();
        let k = at_q.field();
        assert_eq!(k.degree(), 2);
        assert_eq!(at_q.gamma_t(), k.generator());
        // theta is a root of T^2+T+1
        let th = k.generator();
        assert!(k.is_zero(&k.add(&k.add(&k.mul(&th, &th), &th), &k.one())));
        let bad = GenericModule::generic(f2.clone(), vec![APoly::one(), APoly::t()]).unwrap();
        assert!(matches!(bad.reduce_at_place(&PrimeIdeal::parse("T", &f2).unwrap()), Err(Error::BadReduction(_))));
    }

    #[test]
    fn rejects_zero_leading_coefficient() {
        let f2 = Fq::new(2).unwrap();
        assert!(GenericModule::generic(f2.clone(), vec![APoly::one(), APoly::zero()]).is_err());
        assert!(GenericModule::generic(f2, vec![]).is_err());
    }

    #[test]
    fn base_change_preserves_evaluation() {
        let f2 = Fq::new(2).unwrap();
        let m = GenericModule::generic(f2.clone(), vec![APoly::one(), APoly::t()]).unwrap();
        let fm = m.reduce_at_place(&PrimeIdeal::parse("T^2+T+1", &f2).unwrap()).unwrap();
        let big = canonical_field(2, 1, 4).unwrap();
        let root = crate::algebra::epoly::canonical_root(&big, fm.field().modulus()).unwrap();
        let emb = FieldEmbedding { source: fm.field().clone(), target: big.clone(), generator_image: root };
        let bm = fm.base_change(&emb).unwrap();
        let a = APoly::parse("T^2+1", &f2).unwrap();
        for x in fm.field().elements() {
            let lhs = emb.apply(&tw_eval(fm.field(), &fm.phi_of(&a), &x));
            let rhs = tw_eval(&big, &bm.phi_of(&a), &emb.apply(&x));
            assert_eq!(lhs, rhs);
        }
    }
}
