//! Density of GL(r, A/P^n) elements fixing a primitive vector, level by level.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::field::Fq;
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::quotient::QuotRing;
use crate::error::{Error, Result};
use crate::gl::{rat_to_f64, s_density, ser_big, ser_rat};
use crate::lab::sampling::{child_rng, enumerate_gl, fixes_primitive, gl_order_at_level, GlSampler};
use crate::lab::Estimate;

/// Default bound on the group order for exact enumeration.
pub const EXACT_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct DecayConfig {
    pub r: usize,
    pub q: u64,
    pub prime: String,
    pub n_max: u32,
    /// Monte Carlo samples per level; 0 runs Monte Carlo only where exact
    /// enumeration is out of reach, with `fallback_trials`.
    pub trials: u64,
    pub seed: u64,
    pub exact_limit: u64,
}

impl fmt::Display for DecayConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} q={} prime={} levels={} trials={} seed={} exact_limit={}",
            self.r, self.q, self.prime, self.n_max, self.trials, self.seed, self.exact_limit
        )
    }
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => ser_rat(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub level: u32,
    #[serde(serialize_with = "ser_big")]
    pub group_order: BigInt,
    #[serde(serialize_with = "ser_opt_rat")]
    pub exact: Option<BigRational>,
    pub estimate: Option<Estimate>,
}

impl DecayRow {
    /// Exact value if known, else the estimate; with its standard error.
    pub fn value(&self) -> (f64, f64) {
        match (&self.exact, &self.estimate) {
            (Some(x), _) => (rat_to_f64(x), 0.0),
            (None, Some(e)) => (e.value, e.stderr),
            (None, None) => (f64::NAN, f64::NAN),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub config: DecayConfig,
    pub norm: u64,
    pub rows: Vec<DecayRow>,
    /// Level-1 value equals the exact GL(r, F_N) density (None if not exact).
    pub level_one_matches: Option<bool>,
    /// Consecutive values never increase by more than 3 combined standard errors.
    pub non_increasing: bool,
    /// The last level lies more than 3 standard errors below the first.
    pub final_below_first: bool,
    pub pass: bool,
}

/// 1 / (N^{n-1} (N - 1)): the rank-one density at level n.
pub fn rank_one_density(norm: u64, n: u32) -> BigRational {
    let den = num_traits::pow(BigInt::from(norm), n as usize - 1) * BigInt::from(norm - 1);
    BigRational::new(BigInt::from(1), den)
}

/// Within `k` combined standard errors, `b` is not above `a`.
pub fn not_above(a: (f64, f64), b: (f64, f64), k: f64) -> bool {
    b.0 <= a.0 + k * (a.1 * a.1 + b.1 * b.1).sqrt()
}

pub fn exact_primitive_density(ring: &QuotRing, r: usize) -> Result<BigRational> {
    let all = enumerate_gl(ring, r)?;
    let hits = all.iter().filter(|m| fixes_primitive(ring, m)).count();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(all.len())))
}

pub fn padic_decay_run(cfg: &DecayConfig) -> Result<DecayReport> {
    if cfg.n_max < 2 {
        return Err(Error::OutOfRange("need at least two levels".into()));
    }
    if cfg.r == 0 {
        return Err(Error::OutOfRange("r must be positive".into()));
    }
    let fq = Fq::new(cfg.q)?;
    let p = PrimeIdeal::parse(&cfg.prime, &fq)?;
    let norm = p.norm() as u64;
    let mut rows = Vec::new();
    for n in 1..=cfg.n_max {
        let ring = QuotRing::prime_power(fq.clone(), &p, n)?;
        let order = gl_order_at_level(cfg.r, norm, n);
        let exact = if order.to_u64().is_some_and(|o| o <= cfg.exact_limit) {
            match exact_primitive_density(&ring, cfg.r) {
                Ok(x) => Some(x),
                Err(Error::SizeBound(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let trials = if cfg.trials > 0 {
            cfg.trials
        } else if exact.is_none() {
            10_000
        } else {
            0
        };
        let estimate = if trials > 0 {
            let sampler = GlSampler::new(&ring, cfg.r)?;
            let mut rng = child_rng(cfg.seed, n as u64);
            let hits = (0..trials).filter(|_| fixes_primitive(&ring, &sampler.sample(&mut rng))).count() as u64;
            Some(Estimate::from_counts(hits, trials))
        } else {
            None
        };
        rows.push(DecayRow { level: n, group_order: order, exact, estimate });
    }
    let level_one_matches = rows[0].exact.as_ref().map(|x| *x == s_density(cfg.r, norm));
    let non_increasing = rows.windows(2).all(|w| not_above(w[0].value(), w[1].value(), 3.0));
    let (first, last) = (rows[0].value(), rows.last().unwrap().value());
    let final_below_first = last.0 + 3.0 * (first.1 * first.1 + last.1 * last.1).sqrt() < first.0;
    let pass = level_one_matches != Some(false) && non_increasing && final_below_first;
    Ok(DecayReport { config: cfg.clone(), norm, rows, level_one_matches, non_increasing, final_below_first, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(r: usize, q: u64, prime: &str, n_max: u32, trials: u64) -> DecayConfig {
        DecayConfig { r, q, prime: prime.into(), n_max, trials, seed: 1, exact_limit: EXACT_LIMIT }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_one_q3_levels() {
        let rep = padic_decay_run(&cfg(1, 3, "T", 4, 0)).unwrap();
        let got: Vec<_> = rep.rows.iter().map(|r| r.exact.clone().unwrap()).collect();
        assert_eq!(got, vec![rat(1, 2), rat(1, 6), rat(1, 18), rat(1, 54)]);
        assert!(rep.pass);
    }

    #[test]
    fn rank_one_formula_small_cases() {
        for (q, p) in [(2, "T^2+T+1"), (3, "T^2+1"), (2, "T+1")] {
            let rep = padic_decay_run(&cfg(1, q, p, 3, 0)).unwrap();
            for row in &rep.rows {
                assert_eq!(row.exact.clone().unwrap(), rank_one_density(rep.norm, row.level));
            }
        }
    }

    #[test]
    fn rank_two_exact_levels() {
        let rep = padic_decay_run(&DecayConfig { exact_limit: 96, ..cfg(2, 2, "T", 3, 2000) }).unwrap();
        assert_eq!(rep.rows[0].group_order, BigInt::from(6));
        assert_eq!(rep.rows[1].group_order, BigInt::from(96));
        assert_eq!(rep.rows[0].exact, Some(rat(2, 3)));
        assert!(rep.rows[1].exact.clone().unwrap() < rat(2, 3));
        assert!(rep.rows[2].exact.is_none());
        assert_eq!(rep.level_one_matches, Some(true));
        assert!(rep.pass);
    }

    #[test]
    fn needs_two_levels() {
        assert!(padic_decay_run(&cfg(1, 3, "T", 1, 0)).is_err());
    }
}
