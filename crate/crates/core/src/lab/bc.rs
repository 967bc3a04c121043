//! Borel-Cantelli runs: per prime, draw e independent uniform elements of
//! GL(r, A/P) per trial and record whether they share a nonzero fixed vector.

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::quotient::QuotRing;
use crate::error::{Error, Result};
use crate::gl::{joint_density, rat_to_f64, s_density, ser_rat};
use crate::lab::sampling::{child_rng, GlSampler};
use crate::lab::{primes_up_to, Estimate, SimConfig, Target};
use crate::torsion::fixes_common_torsion;

#[derive(Clone, Debug, Serialize)]
pub struct PrimeRow {
    pub prime: String,
    pub degree: usize,
    pub norm: u64,
    /// Density of S(GL(r, A/P), (A/P)^r).
    #[serde(serialize_with = "ser_rat")]
    pub density: BigRational,
    /// density^e
    #[serde(serialize_with = "ser_rat")]
    pub expected: BigRational,
    /// Exact probability that e uniform elements share a fixed vector.
    #[serde(serialize_with = "ser_rat")]
    pub joint: BigRational,
    pub hits: u64,
    pub observed: Estimate,
}

/// Totals over all primes of degree <= `degree`.
#[derive(Clone, Debug, Serialize)]
pub struct CumulativeRow {
    pub degree: usize,
    pub primes: usize,
    /// sum of density^e
    #[serde(serialize_with = "ser_rat")]
    pub expected: BigRational,
    /// sum of joint probabilities
    #[serde(serialize_with = "ser_rat")]
    pub joint: BigRational,
    /// Mean hits per trial.
    pub observed: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HitReport {
    pub config: SimConfig,
    pub primes: Vec<PrimeRow>,
    pub cumulative: Vec<CumulativeRow>,
    /// |observed - joint| in standard errors, over all primes.
    pub z: f64,
    pub pass: bool,
}

impl HitReport {
    pub fn total(&self) -> &CumulativeRow {
        self.cumulative.last().expect("at least one degree")
    }

    /// Expected-column increase from degree cap `a` to `b`.
    pub fn expected_increase(&self, a: usize, b: usize) -> Option<BigRational> {
        let at = |d: usize| self.cumulative.iter().find(|c| c.degree == d).map(|c| c.expected.clone());
        Some(at(b)? - at(a)?)
    }

    /// Per-trial hit counts are not kept; mean hits per trial over all primes.
    pub fn mean_hits(&self) -> f64 {
        self.total().observed
    }
}

pub fn borel_cantelli_run(cfg: &SimConfig) -> Result<HitReport> {
    let fq = cfg.validate()?;
    if cfg.target != Target::MatrixGroup {
        return Err(Error::Mismatch("Borel-Cantelli runs use the matrix-group model".into()));
    }
    if cfg.level != 1 {
        return Err(Error::OutOfRange("Borel-Cantelli runs are at level 1".into()));
    }
    let primes = primes_up_to(&fq, cfg.max_deg)?;
    let rows = primes
        .par_iter()
        .enumerate()
        .map(|(pi, p)| -> Result<PrimeRow> {
            let ring = QuotRing::prime_power(fq.clone(), p, 1)?;
            let sampler = GlSampler::new(&ring, cfg.r)?;
            let mut rngs: Vec<_> = (0..cfg.e as u64).map(|k| child_rng(cfg.seed, ((pi as u64) << 8) | k)).collect();
            let mut hits = 0;
            for _ in 0..cfg.trials {
                let gs: Vec<_> = rngs.iter_mut().map(|g| sampler.sample(g)).collect();
                if fixes_common_torsion(&ring, &gs)? {
                    hits += 1;
                }
            }
            let norm = p.norm() as u64;
            let density = s_density(cfg.r, norm);
            Ok(PrimeRow {
                prime: p.generator().to_expr(),
                degree: p.degree(),
                norm,
                expected: num_traits::pow(density.clone(), cfg.e as usize),
                joint: joint_density(cfg.r, norm, cfg.e),
                density,
                hits,
                observed: Estimate::from_counts(hits, cfg.trials),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cumulative = Vec::new();
    let (mut exp, mut joint) = (BigRational::zero(), BigRational::zero());
    let (mut obs, mut var) = (0.0, 0.0);
    let mut count = 0;
    for d in 1..=cfg.max_deg {
        for row in rows.iter().filter(|r| r.degree == d) {
            exp += &row.expected;
            joint += &row.joint;
            obs += row.observed.value;
            let p = rat_to_f64(&row.joint);
            var += p * (1.0 - p) / cfg.trials as f64;
            count += 1;
        }
        cumulative.push(CumulativeRow { degree: d, primes: count, expected: exp.clone(), joint: joint.clone(), observed: obs, stderr: var.sqrt() });
    }
    let last = cumulative.last().unwrap();
    let diff = (last.observed - rat_to_f64(&last.joint)).abs();
    let z = if last.stderr > 0.0 {
        diff / last.stderr
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(HitReport { config: cfg.clone(), primes: rows, cumulative, z, pass: z <= 3.0 })
}
