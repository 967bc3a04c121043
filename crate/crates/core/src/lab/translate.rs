//! Translation by a unit u: g has eigenvalue 1 with a primitive eigenvector
//! iff u g has eigenvalue u with one.

use std::fmt;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::field::Fq;
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::matrix::scalar_mul;
use crate::algebra::matrix::RingMatrix;
use crate::algebra::poly::APoly;
use crate::algebra::quotient::{QuotElem, QuotRing};
use crate::error::{Error, Result};
use crate::gl::ser_big;
use crate::lab::sampling::{child_rng, enumerate_gl, fixes_primitive, gl_order_at_level, has_primitive_eigenvector, GlSampler};

#[derive(Clone, Debug, Serialize)]
pub struct TranslationReport {
    pub r: usize,
    pub q: u64,
    pub prime: String,
    pub level: u32,
    pub unit: String,
    #[serde(serialize_with = "ser_big")]
    pub group_order: BigInt,
    /// Whole group enumerated (otherwise sampled).
    pub exact: bool,
    pub examined: u64,
    pub count_one: u64,
    pub count_u: u64,
    /// fixes(g) == eigen_u(u g) for every examined g.
    pub bijection_ok: bool,
    pub pass: bool,
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={} level={} eig1={} eigu={} bijection={}", self.unit, self.level, self.count_one, self.count_u, self.bijection_ok)
    }
}

struct Enumerated {
    ring: QuotRing,
    elements: Vec<RingMatrix>,
    fixes: Vec<bool>,
    index: HashMap<RingMatrix, usize>,
}

impl Enumerated {
    fn new(ring: &QuotRing, r: usize) -> Result<Enumerated> {
        let elements = enumerate_gl(ring, r)?;
        let fixes = elements.iter().map(|g| fixes_primitive(ring, g)).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(Enumerated { ring: ring.clone(), elements, fixes, index })
    }

    /// (count of eigenvalue-1, count of eigenvalue-u, bijection holds)
    fn check(&self, u: &QuotElem) -> (u64, u64, bool) {
        let ring = &self.ring;
        let eig: Vec<bool> = self.elements.iter().map(|h| has_primitive_eigenvector(ring, h, u)).collect();
        let ok = self.elements.iter().zip(&self.fixes).all(|(g, &f)| self.index.get(&scalar_mul(ring, u, g)).is_some_and(|&j| eig[j] == f));
        let c1 = self.fixes.iter().filter(|x| **x).count() as u64;
        let cu = eig.iter().filter(|x| **x).count() as u64;
        (c1, cu, ok)
    }
}

fn setup(q: u64, prime: &str, n: u32) -> Result<(QuotRing, PrimeIdeal)> {
    let fq = Fq::new(q)?;
    let p = PrimeIdeal::parse(prime, &fq)?;
    Ok((QuotRing::prime_power(fq, &p, n)?, p))
}

#[allow(clippy::too_many_arguments)]
fn report(r: usize, q: u64, p: &PrimeIdeal, n: u32, u: &QuotElem, exact: bool, examined: u64, c: (u64, u64, bool)) -> TranslationReport {
    let (c1, cu, ok) = c;
    TranslationReport {
        r,
        q,
        prime: p.generator().to_expr(),
        level: n,
        unit: u.to_expr(),
        group_order: gl_order_at_level(r, p.norm() as u64, n),
        exact,
        examined,
        count_one: c1,
        count_u: cu,
        bijection_ok: ok,
        pass: ok && (!exact || c1 == cu),
    }
}

/// Counts eigenvalue-1 and eigenvalue-u elements (both with primitive
/// eigenvectors) and checks that g -> u g carries one set onto the other.
/// Enumerates when the group order is at most `exact_limit`, otherwise
/// samples `trials` elements and checks the correspondence on each.
#[allow(clippy::too_many_arguments)]
pub fn translation_check(r: usize, q: u64, prime: &str, n: u32, u: &APoly, exact_limit: u64, trials: u64, seed: u64) -> Result<TranslationReport> {
    let (ring, p) = setup(q, prime, n)?;
    let u = ring.reduce(u);
    if !ring.is_unit(&u) {
        return Err(Error::NonUnit(u.to_expr()));
    }
    let order = gl_order_at_level(r, p.norm() as u64, n);
    if order.to_u64().is_some_and(|o| o <= exact_limit) {
        let en = Enumerated::new(&ring, r)?;
        return Ok(report(r, q, &p, n, &u, true, en.elements.len() as u64, en.check(&u)));
    }
    let s = GlSampler::new(&ring, r)?;
    let mut rng = child_rng(seed, 0);
    let (mut c1, mut cu, mut ok) = (0, 0, true);
    for _ in 0..trials {
        let g = s.sample(&mut rng);
        let f1 = fixes_primitive(&ring, &g);
        c1 += f1 as u64;
        cu += has_primitive_eigenvector(&ring, &g, &u) as u64;
        ok &= has_primitive_eigenvector(&ring, &scalar_mul(&ring, &u, &g), &u) == f1;
    }
    Ok(report(r, q, &p, n, &u, false, trials, (c1, cu, ok)))
}

/// The exact check for every unit of A/P^n, enumerating the group once.
pub fn translation_all_units(r: usize, q: u64, prime: &str, n: u32) -> Result<Vec<TranslationReport>> {
    let (ring, p) = setup(q, prime, n)?;
    let en = Enumerated::new(&ring, r)?;
    let units = ring.units();
    let checks: Vec<_> = units.par_iter().map(|u| en.check(u)).collect();
    Ok(units.iter().zip(checks).map(|(u, c)| report(r, q, &p, n, u, true, en.elements.len() as u64, c)).collect())
}
