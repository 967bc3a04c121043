//! Univariate polynomials over an extension field, just enough to find
//! roots of F_q-polynomials by equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::{ExtField, FieldElem};
use crate::algebra::poly::APoly;
use crate::algebra::ring::{FqAlgebra, Ring};

type EPoly = Vec<FieldElem>;

struct Ops<'a> {
    k: &'a ExtField,
}

impl Ops<'_> {
    fn trim(&self, mut a: EPoly) -> EPoly {
        while a.last().is_some_and(|c| self.k.is_zero(c)) {
            a.pop();
        }
        a
    }

    fn add(&self, a: &EPoly, b: &EPoly) -> EPoly {
        let n = a.len().max(b.len());
        let z = self.k.zero();
        self.trim((0..n).map(|i| self.k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn sub(&self, a: &EPoly, b: &EPoly) -> EPoly {
        let n = a.len().max(b.len());
        let z = self.k.zero();
        self.trim((0..n).map(|i| self.k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn mul(&self, a: &EPoly, b: &EPoly) -> EPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.k.add(&out[i + j], &self.k.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn rem(&self, a: &EPoly, m: &EPoly) -> EPoly {
        let dm = m.len() - 1;
        let mut r = a.clone();
        let inv = self.k.try_inv(m.last().unwrap()).unwrap();
        while r.len() > dm {
            let c = self.k.mul(r.last().unwrap(), &inv);
            let shift = r.len() - 1 - dm;
            for (j, mj) in m.iter().enumerate() {
                r[shift + j] = self.k.sub(&r[shift + j], &self.k.mul(&c, mj));
            }
            r.pop();
            r = self.trim(r);
        }
        r
    }

    fn mulmod(&self, a: &EPoly, b: &EPoly, m: &EPoly) -> EPoly {
        self.rem(&self.mul(a, b), m)
    }

    fn powmod(&self, a: &EPoly, mut e: u64, m: &EPoly) -> EPoly {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&vec![self.k.one()], m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base, m);
            }
        }
        acc
    }

    fn monic(&self, a: &EPoly) -> EPoly {
        let inv = self.k.try_inv(a.last().unwrap()).unwrap();
        a.iter().map(|c| self.k.mul(c, &inv)).collect()
    }

    fn gcd(&self, a: &EPoly, b: &EPoly) -> EPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn div_exact(&self, a: &EPoly, m: &EPoly) -> EPoly {
        let dm = m.len() - 1;
        let mut r = a.clone();
        let mut quo = vec![self.k.zero(); a.len() - dm];
        let inv = self.k.try_inv(m.last().unwrap()).unwrap();
        for i in (dm..a.len()).rev() {
            let c = self.k.mul(&r[i], &inv);
            quo[i - dm] = c.clone();
            for (j, mj) in m.iter().enumerate() {
                r[i - dm + j] = self.k.sub(&r[i - dm + j], &self.k.mul(&c, mj));
            }
        }
        self.trim(quo)
    }

    /// x^(Q) mod m for Q = q^k, by k successive q-th powers.
    fn x_to_field_size(&self, m: &EPoly) -> EPoly {
        let q = self.k.fq().q() as u64;
        let mut h = self.rem(&vec![self.k.zero(), self.k.one()], m);
        for _ in 0..self.k.degree() {
            h = self.powmod(&h, q, m);
        }
        h
    }

    /// A nontrivial factor of a product of distinct linear factors `g`.
    fn split(&self, g: &EPoly, rng: &mut ChaCha8Rng) -> EPoly {
        let fq = self.k.fq();
        let (p, q) = (fq.p() as u64, fq.q() as u64);
        let deg_g = g.len() - 1;
        loop {
            let delta = FieldElem((0..self.k.degree()).map(|_| rng.gen_range(0..fq.q())).collect());
            let w = if p == 2 {
                // absolute trace of delta*x
                let mut y = self.rem(&vec![self.k.zero(), delta], g);
                let mut tr = y.clone();
                let bits = fq.s() as usize * self.k.degree();
                for _ in 1..bits {
                    y = self.mulmod(&y, &y, g);
                    tr = self.add(&tr, &y);
                }
                tr
            } else {
                // (x + delta)^((q^k - 1)/2) = prod_i (z^(q^i)), z = (x+delta)^((q-1)/2)
                let z = self.powmod(&vec![delta, self.k.one()], (q - 1) / 2, g);
                let mut acc = z.clone();
                let mut zi = z;
                for _ in 1..self.k.degree() {
                    zi = self.powmod(&zi, q, g);
                    acc = self.mulmod(&acc, &zi, g);
                }
                self.sub(&acc, &vec![self.k.one()])
            };
            let h = self.gcd(g, &w);
            if h.len() > 1 && h.len() - 1 < deg_g {
                return h;
            }
        }
    }
}

/// Some root of `f` (over F_q) in `field`, or `None` if it has none there.
/// Deterministic: the splitting randomness is seeded from the inputs.
pub fn find_root(field: &ExtField, f: &APoly) -> Option<FieldElem> {
    let ops = Ops { k: field };
    let fe: EPoly = f.coeffs().iter().map(|&c| field.lift_base(c)).collect();
    if fe.len() < 2 {
        return None;
    }
    let fe = ops.monic(&fe);
    let xq = ops.x_to_field_size(&fe);
    let g = ops.gcd(&fe, &ops.sub(&xq, &vec![field.zero(), field.one()]));
    if g.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (field.degree() as u64) << 8 ^ f.index(field.fq().q()));
    let mut g = g;
    while g.len() > 2 {
        let h = ops.split(&g, &mut rng);
        let other = ops.div_exact(&g, &h);
        g = if h.len() <= other.len() { h } else { other };
    }
    Some(field.neg(&g[0]))
}

/// The smallest root (in coefficient order) of an irreducible `f` whose
/// degree divides the field degree; `None` if `f` has no root in `field`.
pub fn canonical_root(field: &ExtField, f: &APoly) -> Option<FieldElem> {
    let r = find_root(field, f)?;
    let d = f.degree().unwrap();
    (0..d).map(|i| field.frob_pow(&r, i)).min()
}
