//! Finite-level experiments on GL(r, A/P^n): sampling, Borel-Cantelli runs,
//! CRT independence, P-adic decay, translation invariance and place scans.

use std::fmt;

use serde::Serialize;

use crate::algebra::field::Fq;
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::poly::irreducibles_up_to;
use crate::error::{Error, Result};

pub mod bc;
pub mod decay;
pub mod indep;
pub mod sampling;
pub mod scan;
pub mod translate;

pub use bc::{borel_cantelli_run, HitReport};
pub use decay::{padic_decay_run, DecayConfig, DecayReport};
pub use indep::{independence_check, IndepReport};
pub use sampling::{child_rng, enumerate_gl, fixes_primitive, has_primitive_eigenvector, sample_gl, GlSampler};
pub use scan::{chebotarev_scan, ScanReport};
pub use translate::{translation_all_units, translation_check, TranslationReport};

/// Deviations beyond this many standard errors are flagged in scans.
pub const FLAG_SIGMA: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    MatrixGroup,
    PlaceScan { module: String, prime: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    pub r: usize,
    pub q: u64,
    pub e: u32,
    /// Primes (or places) of degree 1..=max_deg.
    pub max_deg: usize,
    pub level: u32,
    pub trials: u64,
    pub seed: u64,
    pub target: Target,
}

impl SimConfig {
    pub fn matrix_group(r: usize, q: u64, e: u32, max_deg: usize, trials: u64, seed: u64) -> SimConfig {
        SimConfig { r, q, e, max_deg, level: 1, trials, seed, target: Target::MatrixGroup }
    }

    pub fn validate(&self) -> Result<Fq> {
        if self.e == 0 {
            return Err(Error::OutOfRange("e must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::OutOfRange("trials must be at least 1".into()));
        }
        if self.r == 0 || self.max_deg == 0 || self.level == 0 {
            return Err(Error::OutOfRange("r, max degree and level must be positive".into()));
        }
        Fq::new(self.q)
    }
}

impl fmt::Display for SimConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} q={} e={} max_deg={} level={} trials={} seed={}", self.r, self.q, self.e, self.max_deg, self.level, self.trials, self.seed)?;
        match &self.target {
            Target::MatrixGroup => write!(f, " target=matrix-group"),
            Target::PlaceScan { module, prime } => write!(f, " target=place-scan module=\"{module}\" prime={prime}"),
        }
    }
}

/// Monic irreducibles of degree 1..=max_deg, in canonical order.
pub fn primes_up_to(fq: &Fq, max_deg: usize) -> Result<Vec<PrimeIdeal>> {
    irreducibles_up_to(fq, max_deg)?.into_iter().map(|p| PrimeIdeal::new(p, fq)).collect()
}

/// An empirical frequency with its sample count and standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, samples: u64) -> Estimate {
        let value = hits as f64 / samples as f64;
        Estimate { value, stderr: sampling::std_error(value, samples), samples }
    }
}
