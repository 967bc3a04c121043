use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use drinfeld_core::Error;

mod commands;
mod report;

use commands::{BcArgs, CountArgs, DecayArgs, IndepArgs, ScanArgs, TorsionArgs, TranslateArgs};
use report::Report;

/// Exit codes, one per failure cause.
mod exit {
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NOT_PRIME_POWER: u8 = 3;
    pub const SIZE_BOUND: u8 = 4;
    pub const BAD_REDUCTION: u8 = 5;
    pub const CHARACTERISTIC_PLACE: u8 = 6;
    pub const NON_UNIT: u8 = 7;
    pub const NO_GOOD_PLACES: u8 = 8;
    pub const NOT_IRREDUCIBLE: u8 = 9;
    pub const OUT_OF_RANGE: u8 = 10;
    pub const SPLITTING_CAP: u8 = 11;
    pub const IO: u8 = 12;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "drinfeld-lab", version, about = "Experiments on Drinfeld modules and fixed points of matrix groups over F_q[T]")]
struct Cli {
    /// Master RNG seed; drawn from entropy when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// key=value file mirroring the long flags; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count matrices in GL(r, F_q) with eigenvalue 1.
    Count(CountArgs),
    /// Torsion of a reduced module and its A-module structure.
    Torsion(TorsionArgs),
    /// Frobenius fixed-point frequency over places of a module.
    Scan(ScanArgs),
    /// Cumulative hit counts over primes in the matrix-group model.
    Bc(BcArgs),
    /// Density of primitive fixed vectors at levels A/P^n.
    Decay(DecayArgs),
    /// Translation by units of A/P^n on eigenvalue sets.
    Translate(TranslateArgs),
    /// Exact independence of two primes through the CRT.
    Indep(IndepArgs),
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => exit::USAGE,
        Error::NotPrime(_) | Error::NotPrimePower(_) => exit::NOT_PRIME_POWER,
        Error::SizeBound(_) => exit::SIZE_BOUND,
        Error::BadReduction(_) => exit::BAD_REDUCTION,
        Error::CharacteristicPlace(_) => exit::CHARACTERISTIC_PLACE,
        Error::NonUnit(_) | Error::NotCoprime(..) | Error::ZeroIdeal => exit::NON_UNIT,
        Error::NoGoodPlaces(_) => exit::NO_GOOD_PLACES,
        Error::NotIrreducible(_) => exit::NOT_IRREDUCIBLE,
        Error::OutOfRange(_) | Error::Mismatch(_) => exit::OUT_OF_RANGE,
        Error::SplittingCap(_) => exit::SPLITTING_CAP,
    }
}

const BOOL_FLAGS: &[&str] = &["no-timestamp", "places"];

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().map(|a| a.to_string_lossy()).any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

/// Appends `--key value` for every config-file entry not already on the
/// command line.
fn merge_config(mut args: Vec<OsString>, path: &Path) -> Result<Vec<OsString>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let original = args.clone();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("{}:{}: expected key=value", path.display(), n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(format!("{}:{}: nested config files are not supported", path.display(), n + 1));
        }
        if given(&original, &key) {
            continue;
        }
        if BOOL_FLAGS.contains(&key.as_str()) {
            match value {
                "true" | "1" | "yes" => args.push(format!("--{key}").into()),
                "false" | "0" | "no" => {}
                _ => return Err(format!("{}:{}: {key} takes true or false", path.display(), n + 1)),
            }
        } else {
            args.push(format!("--{key}").into());
            args.push(value.into());
        }
    }
    Ok(args)
}

fn run(cli: &Cli, seed: u64) -> Result<Report, Error> {
    match &cli.command {
        Command::Count(a) => commands::count(a),
        Command::Torsion(a) => commands::torsion(a),
        Command::Scan(a) => commands::scan(a, seed),
        Command::Bc(a) => commands::bc(a, seed),
        Command::Decay(a) => commands::decay(a, seed),
        Command::Translate(a) => commands::translate(a, seed),
        Command::Indep(a) => commands::indep(a),
    }
}

fn main() -> ExitCode {
    let mut args: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config_path(&args) {
        match merge_config(args, &path) {
            Ok(a) => args = a,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(exit::USAGE);
            }
        }
    }
    let cli = Cli::parse_from(args);
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }
    let seed = cli.seed.unwrap_or_else(rand::random);
    let mut rep = match run(&cli, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    if !rep.config.iter().any(|(k, _)| k == "seed") {
        rep.push_config("seed", seed);
    }
    rep.push_config("format", format!("{:?}", cli.format).to_lowercase());
    if let Some(n) = cli.workers {
        rep.push_config("workers", n);
    }
    let timestamp = (!cli.no_timestamp).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let text = match cli.format {
        Format::Csv => rep.to_csv(timestamp),
        Format::Json => rep.to_json(timestamp),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(exit::IO);
            }
        }
        None => print!("{text}"),
    }
    for c in &rep.checks {
        eprintln!("{}", c.line());
    }
    eprintln!("summary: {}", rep.summary());
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(exit::CHECK_FAILED)
    }
}
