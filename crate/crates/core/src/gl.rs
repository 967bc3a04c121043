//! Exact counting in GL(r, F_q): group order, subspace counts, pointwise
//! stabilisers, fixed-space profiles and the density of elements with a
//! nonzero fixed vector.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::field::{prime_power, Fq};
use crate::error::{Error, Result};

/// Largest group order accepted by the enumeration path.
pub const ENUMERATION_BOUND: u64 = 100_000_000;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn qpow(q: u64, e: usize) -> BigInt {
    num_traits::pow(big(q), e)
}

/// prod_{i=j}^{r-1} (q^r - q^i); the empty product is 1.
fn tail_product(r: usize, q: u64, j: usize) -> BigInt {
    let qr = qpow(q, r);
    (j..r).map(|i| &qr - qpow(q, i)).product()
}

/// card GL(r, F_q) = (q^r - 1)(q^r - q) ... (q^r - q^{r-1}).
pub fn gl_order(r: usize, q: u64) -> BigInt {
    tail_product(r, q, 0)
}

/// Number of j-dimensional subspaces of F_q^r.
pub fn gaussian_t(r: usize, q: u64, j: usize) -> Result<BigInt> {
    if j > r {
        return Err(Error::OutOfRange(format!("j = {j} exceeds r = {r}")));
    }
    let qr = qpow(q, r);
    let qj = qpow(q, j);
    let num: BigInt = (0..j).map(|i| &qr - qpow(q, i)).product();
    let den: BigInt = (0..j).map(|i| &qj - qpow(q, i)).product();
    Ok(num / den)
}

/// Size of the pointwise stabiliser of a j-dimensional subspace.
pub fn stab_count(r: usize, q: u64, j: usize) -> Result<BigInt> {
    if j == 0 || j > r {
        return Err(Error::OutOfRange(format!("j = {j} outside 1..={r}")));
    }
    Ok(tail_product(r, q, j))
}

fn check_q(q: u64) -> Result<Fq> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    Fq::new(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumeration,
    LatticeFormula,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumeration => "enumeration",
            Method::LatticeFormula => "lattice-formula",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "enumeration" | "enum" => Ok(Method::Enumeration),
            "lattice-formula" | "lattice" | "formula" => Ok(Method::LatticeFormula),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

/// `b[j]` = number of g with a fixed space of dimension exactly j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSpaceProfile {
    pub r: usize,
    pub q: u64,
    pub b: Vec<BigInt>,
    pub method: Method,
}

impl FixedSpaceProfile {
    pub fn total(&self) -> BigInt {
        self.b.iter().sum()
    }
    pub fn s_count(&self) -> BigInt {
        self.b[1..].iter().sum()
    }
}

/// Rank of an r x r matrix over F_q stored row-major.
fn small_rank(fq: &Fq, m: &mut [u8], r: usize) -> usize {
    let mut rank = 0;
    for col in 0..r {
        let Some(p) = (rank..r).find(|&i| m[i * r + col] != 0) else {
            continue;
        };
        for k in 0..r {
            m.swap(rank * r + k, p * r + k);
        }
        let inv = fq.inv(m[rank * r + col]);
        for i in rank + 1..r {
            let f = fq.mul(m[i * r + col], inv);
            if f == 0 {
                continue;
            }
            for k in col..r {
                m[i * r + k] = fq.sub(m[i * r + k], fq.mul(f, m[rank * r + k]));
            }
        }
        rank += 1;
    }
    rank
}

fn decode(n: u64, q: u64, out: &mut [u8]) {
    let mut n = n;
    for c in out.iter_mut() {
        *c = (n % q) as u8;
        n /= q;
    }
}

fn check_enumerable(r: usize, q: u64) -> Result<()> {
    let order = gl_order(r, q);
    if order > big(ENUMERATION_BOUND) {
        return Err(Error::SizeBound(format!("card GL({r}, F_{q}) = {order} exceeds {ENUMERATION_BOUND}")));
    }
    Ok(())
}

/// Runs `f` over every invertible r x r matrix, split by first row across
/// workers, and sums the per-worker tallies.
fn for_each_invertible<T, F>(r: usize, q: u64, init: T, f: F) -> Result<T>
where
    T: Send + Clone + Sync + std::ops::AddAssign,
    F: Fn(&Fq, &[u8], &mut T) + Sync,
{
    let fq = check_q(q)?;
    check_enumerable(r, q)?;
    let row = q.pow(r as u32);
    let rest = q.pow((r * r - r) as u32);
    let parts: Vec<T> = (1..row)
        .into_par_iter()
        .map(|first| {
            let mut acc = init.clone();
            let mut m = vec![0u8; r * r];
            let mut scratch = vec![0u8; r * r];
            for n in 0..rest {
                decode(first, q, &mut m[..r]);
                decode(n, q, &mut m[r..]);
                scratch.copy_from_slice(&m);
                if small_rank(&fq, &mut scratch, r) == r {
                    f(&fq, &m, &mut acc);
                }
            }
            acc
        })
        .collect();
    let mut total = init;
    for p in parts {
        total += p;
    }
    Ok(total)
}

#[derive(Clone, Default)]
struct Tally(Vec<u64>);

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
    }
}

fn enumerate_profile(r: usize, q: u64) -> Result<Vec<BigInt>> {
    let tally = for_each_invertible(r, q, Tally(vec![0; r + 1]), |fq, m, acc| {
        let mut d = m.to_vec();
        for i in 0..r {
            d[i * r + i] = fq.sub(d[i * r + i], 1);
        }
        acc.0[r - small_rank(fq, &mut d, r)] += 1;
    })?;
    Ok(tally.0.into_iter().map(big).collect())
}

/// Moebius inversion over the subspace lattice: with
/// N_j = t_j * stab(j) = sum_{h >= j} [h choose j]_q b_h,
/// b_j = sum_{h >= j} (-1)^{h-j} q^{C(h-j, 2)} [h choose j]_q N_h.
fn lattice_profile(r: usize, q: u64) -> Result<Vec<BigInt>> {
    let n: Vec<BigInt> = (0..=r).map(|j| Ok(gaussian_t(r, q, j)? * tail_product(r, q, j))).collect::<Result<_>>()?;
    (0..=r)
        .map(|j| {
            let mut b = BigInt::zero();
            for (h, nh) in n.iter().enumerate().skip(j) {
                let k = h - j;
                let term = qpow(q, k * k.saturating_sub(1) / 2) * gaussian_t(h, q, j)? * nh;
                if k % 2 == 0 {
                    b += term;
                } else {
                    b -= term;
                }
            }
            Ok(b)
        })
        .collect()
}

pub fn fixed_space_profile(r: usize, q: u64, method: Method) -> Result<FixedSpaceProfile> {
    if r == 0 {
        return Err(Error::OutOfRange("r must be positive".into()));
    }
    check_q(q)?;
    let b = match method {
        Method::Enumeration => enumerate_profile(r, q)?,
        Method::LatticeFormula => lattice_profile(r, q)?,
    };
    Ok(FixedSpaceProfile { r, q, b, method })
}

/// card{g in GL(r, F_q) : det(g - I) = 0}, by determinants rather than ranks.
pub fn count_det_singular(r: usize, q: u64) -> Result<u64> {
    for_each_invertible(r, q, 0u64, |fq, m, acc| {
        let g = crate::algebra::matrix::Matrix::from_fn(r, r, |i, j| {
            let v = m[i * r + j];
            if i == j {
                fq.sub(v, 1)
            } else {
                v
            }
        });
        if crate::algebra::matrix::det(fq, &g) == 0 {
            *acc += 1;
        }
    })
}

/// `t_1 * stab(1) - sum_j ((q^j - 1)/(q - 1)) b_j`, which is zero.
pub fn verify_identity(p: &FixedSpaceProfile) -> BigInt {
    let (r, q) = (p.r, p.q);
    let lhs = gaussian_t(r, q, 1).unwrap() * tail_product(r, q, 1);
    let rhs: BigInt = (1..=r).map(|j| gaussian_t(j, q, 1).unwrap() * &p.b[j]).sum();
    lhs - rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub r: usize,
    pub q: u64,
    pub method: Method,
    #[serde(serialize_with = "ser_big")]
    pub gl_order: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub s_count: BigInt,
    #[serde(serialize_with = "ser_rat")]
    pub density: BigRational,
    /// s_count / q^{r^2 - 1}
    #[serde(serialize_with = "ser_rat")]
    pub normalized: BigRational,
    /// t_1 * stab(1)
    #[serde(serialize_with = "ser_big")]
    pub upper_bound: BigInt,
    pub bound_holds: bool,
    #[serde(serialize_with = "ser_big")]
    pub residual: BigInt,
}

pub fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(v))
}

/// `num/den`, always with a denominator.
pub fn fmt_rat(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn rat_to_f64(v: &BigRational) -> f64 {
    let n = v.numer().to_f64().unwrap_or(f64::NAN);
    let d = v.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // scale down huge operands
    let shift = v.numer().bits().max(v.denom().bits()).saturating_sub(1000);
    let n = (v.numer() >> shift as usize).to_f64().unwrap();
    let d = (v.denom() >> shift as usize).to_f64().unwrap();
    n / d
}

pub fn s_count_and_density(r: usize, q: u64, method: Method) -> Result<CountReport> {
    let p = fixed_space_profile(r, q, method)?;
    Ok(report_from_profile(&p))
}

pub fn report_from_profile(p: &FixedSpaceProfile) -> CountReport {
    let (r, q) = (p.r, p.q);
    let order = gl_order(r, q);
    let s = p.s_count();
    let upper = gaussian_t(r, q, 1).unwrap() * tail_product(r, q, 1);
    CountReport {
        r,
        q,
        method: p.method,
        density: BigRational::new(s.clone(), order.clone()),
        normalized: BigRational::new(s.clone(), qpow(q, r * r - 1)),
        bound_holds: s <= upper,
        upper_bound: upper,
        residual: verify_identity(p),
        gl_order: order,
        s_count: s,
    }
}

/// Exact density of e-tuples in GL(r, F_q)^e with a common nonzero fixed
/// vector, by inclusion-exclusion over the subspace lattice.
pub fn joint_density(r: usize, q: u64, e: u32) -> BigRational {
    let order = gl_order(r, q);
    let mut acc = BigRational::zero();
    for j in 1..=r {
        let p = BigRational::new(tail_product(r, q, j), order.clone());
        let term = BigRational::from_integer(qpow(q, j * (j - 1) / 2) * gaussian_t(r, q, j).unwrap()) * num_traits::pow(p, e as usize);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Density of S(GL(r, F_q), F_q^r) from the lattice formula.
pub fn s_density(r: usize, q: u64) -> BigRational {
    joint_density(r, q, 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub r: usize,
    pub rows: Vec<CountReport>,
    pub all_upper_hold: bool,
    pub all_residuals_zero: bool,
    #[serde(serialize_with = "ser_rat")]
    pub min_ratio: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub max_ratio: BigRational,
    /// min and max of q * density over the list
    #[serde(serialize_with = "ser_rat")]
    pub min_q_density: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub max_q_density: BigRational,
}

impl BoundReport {
    pub fn q_density_width(&self) -> BigRational {
        &self.max_q_density - &self.min_q_density
    }
}

pub fn verify_bounds(r: usize, q_list: &[u64], method: Method) -> Result<BoundReport> {
    if q_list.is_empty() {
        return Err(Error::OutOfRange("empty q list".into()));
    }
    let rows = q_list.iter().map(|&q| s_count_and_density(r, q, method)).collect::<Result<Vec<_>>>()?;
    let qd: Vec<BigRational> = rows.iter().map(|c| &c.density * BigRational::from_integer(big(c.q))).collect();
    let min = |v: Vec<&BigRational>| v.into_iter().min().unwrap().clone();
    let max = |v: Vec<&BigRational>| v.into_iter().max().unwrap().clone();
    Ok(BoundReport {
        r,
        all_upper_hold: rows.iter().all(|c| c.bound_holds),
        all_residuals_zero: rows.iter().all(|c| c.residual.is_zero()),
        min_ratio: min(rows.iter().map(|c| &c.normalized).collect()),
        max_ratio: max(rows.iter().map(|c| &c.normalized).collect()),
        min_q_density: min(qd.iter().collect()),
        max_q_density: max(qd.iter().collect()),
        rows,
    })
}
