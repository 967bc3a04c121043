//! Exact check that fixing a vector at two distinct primes is independent:
//! GL(r, A/P1 P2) = GL(r, A/P1) x GL(r, A/P2) via the CRT.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::field::Fq;
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::matrix::{is_invertible_field, Matrix};
use crate::algebra::quotient::{Crt, QuotRing};
use crate::error::{Error, Result};
use crate::gl::ser_rat;
use crate::lab::sampling::{enumerate_gl, MATRIX_ENUMERATION_BOUND};
use crate::torsion::fixes_nonzero_torsion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Every matrix over A/P1P2 enumerated and split by the CRT.
    Crt,
    /// Pairs of the two factor groups enumerated.
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndepReport {
    pub r: usize,
    pub q: u64,
    pub p1: String,
    pub p2: String,
    pub route: Route,
    pub order1: u64,
    pub order2: u64,
    /// card GL(r, A/P1P2) found by enumeration (CRT route), else the product.
    pub order12: u64,
    pub hits1: u64,
    pub hits2: u64,
    pub joint_hits: u64,
    #[serde(serialize_with = "ser_rat")]
    pub joint: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub product: BigRational,
    /// CRT split/join round trip held on every matrix (CRT route).
    pub crt_ok: bool,
    pub equal: bool,
}

fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn independence_check(r: usize, q: u64, p1: &str, p2: &str) -> Result<IndepReport> {
    let fq = Fq::new(q)?;
    let (a, b) = (PrimeIdeal::parse(p1, &fq)?, PrimeIdeal::parse(p2, &fq)?);
    if a == b {
        return Err(Error::NotCoprime(p1.into(), p2.into()));
    }
    let ra = QuotRing::prime_power(fq.clone(), &a, 1)?;
    let rb = QuotRing::prime_power(fq.clone(), &b, 1)?;
    let ga = enumerate_gl(&ra, r)?;
    let gb = enumerate_gl(&rb, r)?;
    let fa: Vec<bool> = ga.iter().map(|m| fixes_nonzero_torsion(&ra, m)).collect::<Result<_>>()?;
    let fb: Vec<bool> = gb.iter().map(|m| fixes_nonzero_torsion(&rb, m)).collect::<Result<_>>()?;
    let (h1, h2) = (fa.iter().filter(|x| **x).count() as u64, fb.iter().filter(|x| **x).count() as u64);
    let (o1, o2) = (ga.len() as u64, gb.len() as u64);

    let crt = Crt::new(&ra, &rb)?;
    let total = crt.product.size().checked_pow((r * r) as u32).unwrap_or(u128::MAX);
    let (route, order12, joint_hits, crt_ok) = if total <= MATRIX_ENUMERATION_BOUND {
        let size = crt.product.size() as u64;
        let (mut order, mut hits, mut ok) = (0u64, 0u64, true);
        for mut idx in 0..total as u64 {
            let m = Matrix::from_fn(r, r, |_, _| {
                let e = crt.product.elem_from_index(idx % size);
                idx /= size;
                e
            });
            let (x, y) = crt.split_matrix(&m);
            ok &= crt.join_matrix(&x, &y)? == m;
            if !is_invertible_field(&ra, &x) || !is_invertible_field(&rb, &y) {
                continue;
            }
            order += 1;
            if fixes_nonzero_torsion(&ra, &x)? && fixes_nonzero_torsion(&rb, &y)? {
                hits += 1;
            }
        }
        (Route::Crt, order, hits, ok)
    } else {
        let mut hits = 0u64;
        for &x in &fa {
            for &y in &fb {
                hits += (x && y) as u64;
            }
        }
        (Route::Product, o1 * o2, hits, true)
    };
    let joint = rat(joint_hits, order12);
    let product = rat(h1, o1) * rat(h2, o2);
    let equal = crt_ok && order12 == o1 * o2 && joint == product;
    Ok(IndepReport {
        r,
        q,
        p1: a.generator().to_expr(),
        p2: b.generator().to_expr(),
        route,
        order1: o1,
        order2: o2,
        order12,
        hits1: h1,
        hits2: h2,
        joint_hits,
        joint,
        product,
        crt_ok,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = independence_check(1, 2, "T", "T+1").unwrap();
        assert_eq!(a.joint, rat(1, 1));
        assert!(a.equal);
        let b = independence_check(2, 2, "T", "T+1").unwrap();
        assert_eq!(b.route, Route::Crt);
        assert_eq!(b.order12, 36);
        assert_eq!(b.joint, rat(4, 9));
        assert!(b.equal);
        let c = independence_check(1, 3, "T", "T+1").unwrap();
        assert_eq!(c.order12, 4);
        assert_eq!(c.joint, rat(1, 4));
        assert!(c.equal);
    }

    #[test]
    fn same_prime_rejected() {
        assert!(independence_check(1, 2, "T", "T").is_err());
    }
}
