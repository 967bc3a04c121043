//! Frobenius statistics over places of good reduction, compared with the
//! exact GL(r, A/P) density under the assumption that the Galois image is
//! all of GL(r, A/P).

use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::quotient::QuotRing;
use crate::drinfeld::{GenericModule, ModuleSpec};
use crate::error::{Error, Result};
use crate::gl::{joint_density, rat_to_f64, ser_rat};
use crate::lab::sampling::{child_rng, std_error, GlSampler};
use crate::lab::{primes_up_to, Estimate, SimConfig, Target, FLAG_SIGMA};
use crate::torsion::{conjugate, fixes_common_torsion, frobenius_on_torsion, FrobMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct PlaceRow {
    pub place: String,
    pub degree: usize,
    pub splitting_degree: usize,
    pub frobenius: String,
    pub fixes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    pub degree: usize,
    pub places: u64,
    pub hits: u64,
    pub observed: Estimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub config: SimConfig,
    pub norm: u64,
    /// Exact density predicted by a surjective Galois image.
    #[serde(serialize_with = "ser_rat")]
    pub predicted: BigRational,
    pub places: Vec<PlaceRow>,
    pub strata: Vec<StratumRow>,
    pub observed: Estimate,
    /// Binomial standard error under the prediction, sqrt(p(1-p)/N).
    pub predicted_stderr: f64,
    /// (observed - predicted) / predicted_stderr
    pub z: f64,
    /// Deviation beyond 5 standard errors: possible non-surjective image or
    /// extra endomorphisms.
    pub flagged: bool,
}

impl ScanReport {
    pub fn within(&self, sigmas: f64) -> bool {
        self.z.abs() <= sigmas
    }
}

/// Places of degree <= max_deg with good reduction, other than `p`.
pub fn good_places(module: &GenericModule, p: &PrimeIdeal, max_deg: usize) -> Result<Vec<PrimeIdeal>> {
    Ok(primes_up_to(module.fq(), max_deg)?.into_iter().filter(|l| l != p && module.has_good_reduction(l)).collect())
}

pub fn chebotarev_scan(cfg: &SimConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let Target::PlaceScan { module, prime } = &cfg.target else {
        return Err(Error::Mismatch("place scans need a module and a prime".into()));
    };
    let module = GenericModule::from_spec(&ModuleSpec::parse(module)?)?;
    let fq = module.fq().clone();
    if fq.q() as u64 != cfg.q || module.rank() != cfg.r {
        return Err(Error::Mismatch(format!("config r={} q={} disagrees with the module", cfg.r, cfg.q)));
    }
    let p = PrimeIdeal::parse(prime, &fq)?;
    if !module.has_good_reduction(&p) {
        return Err(Error::BadReduction(p.generator().to_expr()));
    }
    let places = good_places(&module, &p, cfg.max_deg)?;
    if places.is_empty() {
        return Err(Error::NoGoodPlaces(cfg.max_deg));
    }
    let frobs: Vec<FrobMatrix> = places.par_iter().map(|l| frobenius_on_torsion(&module, &p, l)).collect::<Result<_>>()?;
    let rows: Vec<PlaceRow> = frobs
        .iter()
        .map(|f| PlaceRow {
            place: f.place.generator().to_expr(),
            degree: f.place.degree(),
            splitting_degree: f.splitting_degree,
            frobenius: f.to_string(),
            fixes: f.fixes_nonzero(),
        })
        .collect();
    let strata = (1..=cfg.max_deg)
        .filter_map(|d| {
            let group: Vec<_> = rows.iter().filter(|r| r.degree == d).collect();
            if group.is_empty() {
                return None;
            }
            let hits = group.iter().filter(|r| r.fixes).count() as u64;
            Some(StratumRow { degree: d, places: group.len() as u64, hits, observed: Estimate::from_counts(hits, group.len() as u64) })
        })
        .collect();

    let norm = p.norm() as u64;
    let predicted = joint_density(cfg.r, norm, cfg.e);
    let observed = if cfg.e == 1 {
        let hits = rows.iter().filter(|r| r.fixes).count() as u64;
        Estimate::from_counts(hits, rows.len() as u64)
    } else {
        joint_trials(cfg, &p, &frobs)?
    };
    let pf = rat_to_f64(&predicted);
    let se = std_error(pf, observed.samples);
    let diff = observed.value - pf;
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ScanReport { config: cfg.clone(), norm, predicted, places: rows, strata, observed, predicted_stderr: se, z, flagged: z.abs() > FLAG_SIGMA })
}

/// e > 1: the places are split round-robin into e strata; each trial takes a
/// uniform place from every stratum and conjugates its Frobenius by a uniform
/// element of GL(r, A/P), since each matrix is only defined up to conjugacy.
fn joint_trials(cfg: &SimConfig, p: &PrimeIdeal, frobs: &[FrobMatrix]) -> Result<Estimate> {
    let e = cfg.e as usize;
    if frobs.len() < e {
        return Err(Error::NoGoodPlaces(cfg.max_deg));
    }
    let ring = QuotRing::prime_power(frobs[0].ring.fq().clone(), p, 1)?;
    let sampler = GlSampler::new(&ring, cfg.r)?;
    let strata: Vec<Vec<&FrobMatrix>> = (0..e).map(|k| frobs.iter().skip(k).step_by(e).collect()).collect();
    let mut rng = child_rng(cfg.seed, 0);
    let mut hits = 0;
    for _ in 0..cfg.trials {
        let mut ms = Vec::with_capacity(e);
        for s in &strata {
            let f = s[rng.gen_range(0..s.len())];
            ms.push(conjugate(&ring, &f.matrix, &sampler.sample(&mut rng))?);
        }
        if fixes_common_torsion(&ring, &ms)? {
            hits += 1;
        }
    }
    Ok(Estimate::from_counts(hits, cfg.trials))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(module: &str, r: usize, q: u64, prime: &str, max_deg: usize, e: u32) -> Result<ScanReport> {
        let cfg =
            SimConfig { r, q, e, max_deg, level: 1, trials: 400, seed: 3, target: Target::PlaceScan { module: module.into(), prime: prime.into() } };
        chebotarev_scan(&cfg)
    }

    #[test]
    fn carlitz_q2_t_always_hits() {
        let rep = scan("q=2; r=1; phiT=T,1", 1, 2, "T", 6, 1).unwrap();
        assert!(rep.places.iter().all(|p| p.fixes));
        assert_eq!(rep.observed.value, 1.0);
        assert_eq!(rep.z, 0.0);
    }

    #[test]
    fn carlitz_q3_half() {
        let rep = scan("q=3; r=1; phiT=T,1", 1, 3, "T", 5, 1).unwrap();
        assert_eq!(rep.predicted, BigRational::new(1.into(), 2.into()));
        assert!(rep.within(3.0), "z = {}", rep.z);
    }

    #[test]
    fn joint_scan_runs() {
        let rep = scan("q=3; r=1; phiT=T,1", 1, 3, "T", 4, 2).unwrap();
        assert_eq!(rep.predicted, BigRational::new(1.into(), 4.into()));
        assert_eq!(rep.observed.samples, 400);
        assert!(rep.within(4.0), "z = {}", rep.z);
    }

    #[test]
    fn errors() {
        assert!(matches!(scan("q=2; r=2; phiT=T,1,T", 2, 2, "T", 3, 1), Err(Error::BadReduction(_))));
        assert!(matches!(scan("q=2; r=1; phiT=T,1", 1, 2, "T", 1, 3), Err(Error::NoGoodPlaces(_))));
        assert!(scan("q=2; r=1; phiT=T,1", 2, 2, "T", 3, 1).is_err());
    }
}
