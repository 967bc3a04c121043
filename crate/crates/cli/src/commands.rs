//! One function per subcommand, each producing a report.

use clap::{Args, ValueEnum};
use drinfeld_core::gl::{gl_order, s_count_and_density, CountReport};
use drinfeld_core::lab::decay::EXACT_LIMIT;
use drinfeld_core::lab::{
    borel_cantelli_run, chebotarev_scan, independence_check, padic_decay_run, translation_all_units, translation_check, DecayConfig, SimConfig,
    Target, TranslationReport, FLAG_SIGMA,
};
use drinfeld_core::torsion::torsion_record;
use drinfeld_core::{fmt_rat, rat_to_f64, APoly, Fq, GenericModule, Method, ModuleSpec, PrimeIdeal, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::report::{dec, Check, Report, Status};

/// Largest group that `--method auto` enumerates.
const AUTO_ENUMERATION: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    /// Enumeration up to 10^6 group elements, the lattice formula beyond.
    Auto,
    Enumeration,
    LatticeFormula,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q_list: Vec<u64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: CountMethod,
}

#[derive(Args, Debug)]
pub struct TorsionArgs {
    /// Module spec, e.g. "q=2; r=2; phiT=T,1,1".
    #[arg(long)]
    pub module: String,
    #[arg(long)]
    pub ideal: String,
    /// Reduction place, a monic irreducible.
    #[arg(long)]
    pub place: String,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub module: String,
    #[arg(long)]
    pub prime: String,
    #[arg(long, default_value_t = 6)]
    pub max_deg: usize,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    /// Trials for joint (e > 1) scans.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Allowed deviation in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    /// One row per place instead of per degree stratum.
    #[arg(long)]
    pub places: bool,
}

#[derive(Args, Debug)]
pub struct BcArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long)]
    pub max_deg: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct DecayArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub prime: String,
    #[arg(long)]
    pub levels: u32,
    /// Monte Carlo samples per level; 0 samples only levels too large to enumerate.
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, default_value_t = EXACT_LIMIT)]
    pub exact_limit: u64,
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub prime: String,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    /// A unit of A/P^n; every unit when omitted.
    #[arg(long)]
    pub unit: Option<String>,
    #[arg(long, default_value_t = EXACT_LIMIT)]
    pub exact_limit: u64,
    /// Samples when the group is too large to enumerate.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct IndepArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub p1: String,
    #[arg(long)]
    pub p2: String,
}

fn record<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn big_rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn resolve_method(m: CountMethod, r: usize, q: u64) -> Method {
    match m {
        CountMethod::Enumeration => Method::Enumeration,
        CountMethod::LatticeFormula => Method::LatticeFormula,
        CountMethod::Auto if gl_order(r, q) <= BigInt::from(AUTO_ENUMERATION) => Method::Enumeration,
        CountMethod::Auto => Method::LatticeFormula,
    }
}

pub fn count(a: &CountArgs) -> Result<Report> {
    let reports: Vec<CountReport> = a.q_list.iter().map(|&q| s_count_and_density(a.r, q, resolve_method(a.method, a.r, q))).collect::<Result<_>>()?;
    let cols = ["r", "q", "method", "gl_order", "s_count", "density", "q_density", "normalized", "upper_bound", "bound_holds", "residual"];
    let mut rep = Report::new(&cols, record(&reports));
    rep.push_config("command", "count");
    rep.push_config("r", a.r);
    rep.push_config("q_list", a.q_list.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    rep.push_config("method", format!("{:?}", a.method).to_lowercase());
    let mut qd = Vec::new();
    for c in &reports {
        let q_density = &c.density * big_rat(c.q);
        rep.rows.push(vec![
            c.r.to_string(),
            c.q.to_string(),
            c.method.to_string(),
            c.gl_order.to_string(),
            c.s_count.to_string(),
            fmt_rat(&c.density),
            fmt_rat(&q_density),
            fmt_rat(&c.normalized),
            c.upper_bound.to_string(),
            c.bound_holds.to_string(),
            c.residual.to_string(),
        ]);
        qd.push(q_density);
    }
    let nonzero = reports.iter().filter(|c| c.residual != BigInt::from(0)).count();
    rep.checks.push(Check::new("identity-residual", nonzero == 0, format!("{nonzero} of {} rows nonzero", reports.len())));
    let broken = reports.iter().filter(|c| !c.bound_holds).count();
    rep.checks.push(Check::new("upper-bound", broken == 0, format!("s_count <= t_1 * stab(1) fails in {broken} of {} rows", reports.len())));
    if let (Some(lo), Some(hi)) = (qd.iter().min(), qd.iter().max()) {
        rep.checks.push(Check {
            name: "q-density-bracket".into(),
            status: Status::Pass,
            detail: format!("q*density in [{}, {}], width {}", fmt_rat(lo), fmt_rat(hi), fmt_rat(&(hi - lo))),
        });
    }
    Ok(rep)
}

pub fn torsion(a: &TorsionArgs) -> Result<Report> {
    let module = GenericModule::from_spec(&ModuleSpec::parse(&a.module)?)?;
    let fq = module.fq().clone();
    let ideal = APoly::parse(&a.ideal, &fq)?;
    let place = PrimeIdeal::parse(&a.place, &fq)?;
    let (rec, tm) = torsion_record(&module, &ideal, &place)?;
    let cols =
        ["module", "ideal", "place", "base_degree", "splitting_degree", "dimension", "structure", "invariant_factors", "generators", "frobenius"];
    let mut rep = Report::new(&cols, record(&rec));
    rep.push_config("command", "torsion");
    rep.push_config("module", module.spec());
    rep.push_config("ideal", &rec.ideal);
    rep.push_config("place", &rec.place);
    let frob = rec.frobenius.as_ref().map(|f| {
        let rows: Vec<String> = f.matrix.iter().map(|r| r.join(" ")).collect();
        format!("[{}]", rows.join("; "))
    });
    rep.rows.push(vec![
        rec.module.clone(),
        rec.ideal.clone(),
        rec.place.clone(),
        rec.base_degree.to_string(),
        rec.splitting_degree.to_string(),
        rec.dimension.to_string(),
        rec.structure.clone(),
        rec.invariant_factors.join(";"),
        rec.generators.join(";"),
        frob.unwrap_or_default(),
    ]);
    let a_monic = ideal.monic(&fq);
    let expected: Vec<APoly> = if a_monic.deg0() == 0 { Vec::new() } else { vec![a_monic.clone(); module.rank()] };
    let shape_ok = tm.invariant_factors == expected && tm.dimension() == module.rank() * a_monic.deg0();
    rep.checks.push(Check::new(
        "full-torsion-shape",
        shape_ok,
        format!("torsion {} over degree {}, expected rank {} over A/({})", rec.structure, rec.splitting_degree, module.rank(), rec.ideal),
    ));
    Ok(rep)
}

pub fn scan(a: &ScanArgs, seed: u64) -> Result<Report> {
    let spec = ModuleSpec::parse(&a.module)?;
    let cfg = SimConfig {
        r: spec.r,
        q: spec.q,
        e: a.e,
        max_deg: a.max_deg,
        level: 1,
        trials: a.trials,
        seed,
        target: Target::PlaceScan { module: spec.to_string(), prime: a.prime.clone() },
    };
    let s = chebotarev_scan(&cfg)?;
    let cols: &[&'static str] =
        if a.places { &["place", "degree", "splitting_degree", "frobenius", "fixes"] } else { &["degree", "places", "hits", "frequency", "stderr"] };
    let mut rep = Report::new(cols, record(&s));
    rep.push_config("command", "scan");
    rep.push_config("module", spec.to_string());
    rep.push_config("prime", &a.prime);
    rep.push_config("max_deg", a.max_deg);
    rep.push_config("e", a.e);
    rep.push_config("trials", a.trials);
    rep.push_config("sigma", a.sigma);
    rep.push_config("seed", seed);
    if a.places {
        for p in &s.places {
            rep.rows.push(vec![p.place.clone(), p.degree.to_string(), p.splitting_degree.to_string(), p.frobenius.clone(), p.fixes.to_string()]);
        }
    } else {
        for st in &s.strata {
            rep.rows.push(vec![st.degree.to_string(), st.places.to_string(), st.hits.to_string(), dec(st.observed.value), dec(st.observed.stderr)]);
        }
    }
    let detail = format!(
        "observed {} +- {} over {} samples, predicted {}, z = {:.3}",
        dec(s.observed.value),
        dec(s.predicted_stderr),
        s.observed.samples,
        fmt_rat(&s.predicted),
        s.z
    );
    let status = if s.flagged { Status::Flag } else { Status::from_bool(s.within(a.sigma)) };
    let name = if s.flagged {
        format!("beyond {FLAG_SIGMA} sigma, possible non-surjective image or endomorphism")
    } else {
        format!("within {} sigma of the surjective-image density", a.sigma)
    };
    rep.checks.push(Check { name, status, detail });
    Ok(rep)
}

pub fn bc(a: &BcArgs, seed: u64) -> Result<Report> {
    let cfg = SimConfig::matrix_group(a.r, a.q, a.e, a.max_deg, a.trials, seed);
    let h = borel_cantelli_run(&cfg)?;
    let cols = [
        "prime",
        "degree",
        "norm",
        "density",
        "expected",
        "joint",
        "hits",
        "frequency",
        "stderr",
        "cum_expected",
        "cum_joint",
        "cum_observed",
        "cum_stderr",
    ];
    let mut rep = Report::new(&cols, record(&h));
    rep.push_config("command", "bc");
    rep.push_config("r", a.r);
    rep.push_config("q", a.q);
    rep.push_config("e", a.e);
    rep.push_config("max_deg", a.max_deg);
    rep.push_config("trials", a.trials);
    rep.push_config("seed", seed);
    let mut exp = BigRational::from_integer(0.into());
    let mut joint = exp.clone();
    let (mut obs, mut var) = (0.0, 0.0);
    for p in &h.primes {
        exp += &p.expected;
        joint += &p.joint;
        obs += p.observed.value;
        let pj = rat_to_f64(&p.joint);
        var += pj * (1.0 - pj) / a.trials as f64;
        rep.rows.push(vec![
            p.prime.clone(),
            p.degree.to_string(),
            p.norm.to_string(),
            fmt_rat(&p.density),
            fmt_rat(&p.expected),
            fmt_rat(&p.joint),
            p.hits.to_string(),
            dec(p.observed.value),
            dec(p.observed.stderr),
            fmt_rat(&exp),
            fmt_rat(&joint),
            dec(obs),
            dec(var.sqrt()),
        ]);
    }
    let t = h.total();
    rep.checks.push(Check::new(
        "cumulative-within-3-sigma",
        h.pass,
        format!("mean hits {} vs exact {} (sum of density^e {}), z = {:.3}", dec(t.observed), fmt_rat(&t.joint), fmt_rat(&t.expected), h.z),
    ));
    Ok(rep)
}

pub fn decay(a: &DecayArgs, seed: u64) -> Result<Report> {
    let cfg = DecayConfig { r: a.r, q: a.q, prime: a.prime.clone(), n_max: a.levels, trials: a.trials, seed, exact_limit: a.exact_limit };
    let d = padic_decay_run(&cfg)?;
    let cols = ["level", "group_order", "exact", "estimate", "stderr", "samples"];
    let mut rep = Report::new(&cols, record(&d));
    rep.push_config("command", "decay");
    rep.push_config("r", a.r);
    rep.push_config("q", a.q);
    rep.push_config("prime", &a.prime);
    rep.push_config("levels", a.levels);
    rep.push_config("trials", a.trials);
    rep.push_config("exact_limit", a.exact_limit);
    rep.push_config("seed", seed);
    for row in &d.rows {
        let (est, se, n) = match &row.estimate {
            Some(e) => (dec(e.value), dec(e.stderr), e.samples.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        rep.rows.push(vec![row.level.to_string(), row.group_order.to_string(), row.exact.as_ref().map(fmt_rat).unwrap_or_default(), est, se, n]);
    }
    if let Some(ok) = d.level_one_matches {
        rep.checks.push(Check::new("level-one-density", ok, "level 1 equals the exact GL(r, A/P) density"));
    }
    rep.checks.push(Check::new("non-increasing", d.non_increasing, "no level exceeds the previous by 3 standard errors"));
    rep.checks.push(Check::new("final-below-first", d.final_below_first, "last level more than 3 standard errors below level 1"));
    Ok(rep)
}

pub fn translate(a: &TranslateArgs, seed: u64) -> Result<Report> {
    let fq = Fq::new(a.q)?;
    let reports: Vec<TranslationReport> = match &a.unit {
        Some(u) => vec![translation_check(a.r, a.q, &a.prime, a.level, &APoly::parse(u, &fq)?, a.exact_limit, a.trials, seed)?],
        None => translation_all_units(a.r, a.q, &a.prime, a.level)?,
    };
    let cols = ["unit", "group_order", "exact", "examined", "count_one", "count_u", "bijection_ok", "pass"];
    let mut rep = Report::new(&cols, record(&reports));
    rep.push_config("command", "translate");
    rep.push_config("r", a.r);
    rep.push_config("q", a.q);
    rep.push_config("prime", &a.prime);
    rep.push_config("level", a.level);
    rep.push_config("unit", a.unit.as_deref().unwrap_or("all"));
    rep.push_config("exact_limit", a.exact_limit);
    rep.push_config("trials", a.trials);
    rep.push_config("seed", seed);
    for t in &reports {
        rep.rows.push(vec![
            t.unit.clone(),
            t.group_order.to_string(),
            t.exact.to_string(),
            t.examined.to_string(),
            t.count_one.to_string(),
            t.count_u.to_string(),
            t.bijection_ok.to_string(),
            t.pass.to_string(),
        ]);
    }
    let bad = reports.iter().filter(|t| !t.pass).count();
    let how = if reports.iter().all(|t| t.exact) { "exact" } else { "sampled" };
    rep.checks.push(Check::new("translation-invariance", bad == 0, format!("{bad} of {} units fail ({how})", reports.len())));
    Ok(rep)
}

pub fn indep(a: &IndepArgs) -> Result<Report> {
    let i = independence_check(a.r, a.q, &a.p1, &a.p2)?;
    let cols = ["p1", "p2", "route", "order1", "order2", "order12", "hits1", "hits2", "joint_hits", "joint", "product", "crt_ok", "equal"];
    let mut rep = Report::new(&cols, record(&i));
    rep.push_config("command", "indep");
    rep.push_config("r", a.r);
    rep.push_config("q", a.q);
    rep.push_config("p1", &a.p1);
    rep.push_config("p2", &a.p2);
    let route = json!(i.route).as_str().unwrap_or_default().to_string();
    rep.rows.push(vec![
        i.p1.clone(),
        i.p2.clone(),
        route,
        i.order1.to_string(),
        i.order2.to_string(),
        i.order12.to_string(),
        i.hits1.to_string(),
        i.hits2.to_string(),
        i.joint_hits.to_string(),
        fmt_rat(&i.joint),
        fmt_rat(&i.product),
        i.crt_ok.to_string(),
        i.equal.to_string(),
    ]);
    rep.checks.push(Check::new("exact-product", i.equal, format!("joint {} vs product {}", fmt_rat(&i.joint), fmt_rat(&i.product))));
    rep.checks.push(Check::new("crt-round-trip", i.crt_ok, "split and join agree on every matrix"));
    Ok(rep)
}
