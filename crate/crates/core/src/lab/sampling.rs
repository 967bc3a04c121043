//! Uniform sampling and enumeration of GL(r, A/P^n), and fixed-vector tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::matrix::{is_invertible_field, minus_identity, minus_scalar, Matrix, RingMatrix};
use crate::algebra::quotient::{QuotElem, QuotRing};
use crate::algebra::ring::Ring;
use crate::algebra::snf::local_smith_valuations;
use crate::error::{Error, Result};

/// Largest number of matrices (invertible or not) the exact enumerators visit.
pub const MATRIX_ENUMERATION_BOUND: u128 = 4_000_000;

/// Independent stream `key` under the master `seed`.
pub fn child_rng(seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

/// Uniform sampler for GL(r, A/P^n).
#[derive(Clone, Debug)]
pub struct GlSampler {
    ring: QuotRing,
    residue: QuotRing,
    r: usize,
}

impl GlSampler {
    pub fn new(ring: &QuotRing, r: usize) -> Result<GlSampler> {
        Ok(GlSampler { ring: ring.clone(), residue: ring.residue_field()?, r })
    }

    pub fn ring(&self) -> &QuotRing {
        &self.ring
    }

    /// Rejection-sample an invertible matrix mod P, then lift along a uniform
    /// multiple of P.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> RingMatrix {
        let base = loop {
            let m = self.residue.random_matrix(self.r, rng);
            if is_invertible_field(&self.residue, &m) {
                break m;
            }
        };
        if self.ring.level() == Some(1) {
            return base;
        }
        let fq = self.ring.fq();
        let p = self.residue.modulus();
        Matrix::from_fn(self.r, self.r, |i, j| {
            let x = self.ring.random(rng);
            let low = x.rem(p, fq);
            self.ring.reduce(&x.sub(&low, fq).add(base.get(i, j), fq))
        })
    }
}

pub fn sample_gl<G: Rng + ?Sized>(ring: &QuotRing, r: usize, rng: &mut G) -> Result<RingMatrix> {
    Ok(GlSampler::new(ring, r)?.sample(rng))
}

fn level(ring: &QuotRing) -> u32 {
    ring.level().expect("prime-power modulus")
}

/// Some primitive u (not in P (A/P^n)^r) with M u = u.
pub fn fixes_primitive(ring: &QuotRing, m: &RingMatrix) -> bool {
    if m.rows() == 1 {
        return ring.is_one(m.get(0, 0));
    }
    local_smith_valuations(ring, &minus_identity(ring, m)).contains(&level(ring))
}

/// Some primitive u with M u = c u.
pub fn has_primitive_eigenvector(ring: &QuotRing, m: &RingMatrix, c: &QuotElem) -> bool {
    if m.rows() == 1 {
        // a 1 x 1 Smith diagonal has valuation n iff the entry is zero
        return m.get(0, 0) == c;
    }
    local_smith_valuations(ring, &minus_scalar(ring, m, c)).contains(&level(ring))
}

/// Brute force: search every primitive vector. Test oracle only.
pub fn fixes_primitive_brute(ring: &QuotRing, m: &RingMatrix) -> bool {
    let r = m.rows();
    let size = ring.size() as u64;
    let total = size.pow(r as u32);
    (0..total).any(|mut idx| {
        let v: Vec<QuotElem> = (0..r)
            .map(|_| {
                let e = ring.elem_from_index(idx % size);
                idx /= size;
                e
            })
            .collect();
        v.iter().any(|x| ring.is_unit(x)) && crate::algebra::matrix::mat_vec(ring, m, &v) == v
    })
}

/// Every element of GL(r, A/P^n), in index order.
pub fn enumerate_gl(ring: &QuotRing, r: usize) -> Result<Vec<RingMatrix>> {
    let size = ring.size();
    let total = size.checked_pow((r * r) as u32).unwrap_or(u128::MAX);
    if total > MATRIX_ENUMERATION_BOUND {
        return Err(Error::SizeBound(format!("{total} matrices over {}", ring.modulus().to_expr())));
    }
    let residue = ring.residue_field()?;
    let size = size as u64;
    let mut out = Vec::new();
    for mut idx in 0..total as u64 {
        let m = Matrix::from_fn(r, r, |_, _| {
            let e = ring.elem_from_index(idx % size);
            idx /= size;
            e
        });
        if is_invertible_field(&residue, &ring.project_matrix(&residue, &m)) {
            out.push(m);
        }
    }
    Ok(out)
}

/// card GL(r, A/P^n) = N^{(n-1) r^2} card GL(r, F_N).
pub fn gl_order_at_level(r: usize, norm: u64, n: u32) -> num_bigint::BigInt {
    crate::gl::gl_order(r, norm) * num_traits::pow(num_bigint::BigInt::from(norm), (n as usize - 1) * r * r)
}

/// Binomial standard error sqrt(p(1-p)/n).
pub fn std_error(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}
