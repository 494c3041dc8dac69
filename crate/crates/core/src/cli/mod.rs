//! Command implementations behind the `lconv` binary.
//!
//! Every command resolves its settings (flags over a `--config` key=value
//! file over defaults), writes its output and a `<output>.manifest.json`
//! with checksums, and maps the outcome to an exit code: 0 ok, 1 invariant
//! failure, 2 usage or input error.

mod commands;
mod config;
mod verify;

pub use config::{parse_config, Grid, Method, OutputFormat, RunConfig, Truncation, CONFIG_KEYS};

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::report::{sha256_hex, Checksum, Machine, Manifest};
use crate::specfun::EulerMaclaurin;
use crate::sum::with_workers;
use crate::zeros::{enrich, load_ordinates, ZeroSet, DEFAULT_RESIDUAL_TOL};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("invariant failed: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Usage(_) | CliError::Input(_) => 2,
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(
    io::Error,
    crate::sieve::SieveError,
    crate::convolve::ConvolveError,
    crate::zeros::ZeroError,
    crate::explicit::ExplicitError,
    crate::specfun::SpecfunError
);

#[derive(Debug, Parser)]
#[command(name = "lconv", version, about = "Liouville/Möbius additive convolutions and their explicit formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a λ or μ table (binary by default, or CSV).
    Sieve,
    /// Compute S_d(n) for n ≤ limit.
    Convolve,
    /// Attach ζ′(ρ), ζ(2ρ) to zero ordinates and write a cache.
    #[command(name = "zeros-enrich")]
    ZerosEnrich,
    /// Compare direct values with an explicit formula or exact identity.
    Verify {
        #[arg(value_enum, ignore_case = true)]
        target: Target,
    },
    /// Time the sieve and the naive and FFT convolutions.
    Bench,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "L")]
    L,
    #[value(name = "M")]
    M,
    Cesaro,
    CesaroMu,
    Dfold,
    Dirichlet,
    Exponential,
    Weighted,
    Identity,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::L => "L",
            Target::M => "M",
            Target::Cesaro => "cesaro",
            Target::CesaroMu => "cesaro-mu",
            Target::Dfold => "dfold",
            Target::Dirichlet => "dirichlet",
            Target::Exponential => "exponential",
            Target::Weighted => "weighted",
            Target::Identity => "identity",
        }
    }
}

#[derive(Debug, Args)]
struct Flags {
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// sieve / convolution limit N
    #[arg(long, global = true)]
    limit: Option<String>,
    /// ordinate file or enriched cache
    #[arg(long, global = true)]
    zeros: Option<String>,
    /// number of zeros K
    #[arg(long, global = true)]
    count: Option<String>,
    /// truncation height
    #[arg(long = "T", global = true)]
    t: Option<String>,
    /// number of factors d
    #[arg(long, global = true)]
    d: Option<String>,
    /// complex points "re,im;re,im"
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    /// exponential weights "y1,y2,..."
    #[arg(long, global = true)]
    y: Option<String>,
    /// log:count:lo:hi, lin:count:lo:hi or a comma list
    #[arg(long, global = true)]
    samples: Option<String>,
    /// output path, "-" for stdout
    #[arg(long, global = true)]
    output: Option<String>,
    /// csv, json or bin
    #[arg(long, global = true)]
    format: Option<String>,
    /// worker threads (0 = all cores)
    #[arg(long, global = true)]
    workers: Option<String>,
    /// random configurations for `verify identity`
    #[arg(long, global = true)]
    trials: Option<String>,
    /// liouville or moebius
    #[arg(long, global = true)]
    kind: Option<String>,
    /// convolution method: auto, fft, blocked or naive
    #[arg(long, global = true)]
    method: Option<String>,
    /// weight support start
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// weight support end
    #[arg(long, global = true)]
    b: Option<String>,
    /// weight scales "eta1,eta2,..."
    #[arg(long, global = true)]
    eta: Option<String>,
    /// power-bump exponent
    #[arg(long, global = true)]
    p: Option<String>,
    /// RNG seed for `verify identity`
    #[arg(long, global = true)]
    seed: Option<String>,
    /// allow the Möbius d-fold formula for d ≠ 2
    #[arg(long, global = true)]
    extrapolated: bool,
}

impl Flags {
    fn merged(&self) -> Result<BTreeMap<String, String>, CliError> {
        let mut map = match &self.config {
            Some(path) => config::read_config(path)?,
            None => BTreeMap::new(),
        };
        // a count on the command line overrides a height from the file and vice versa
        if self.count.is_some() {
            map.remove("T");
        }
        if self.t.is_some() {
            map.remove("count");
        }
        let pairs = [
            ("limit", &self.limit),
            ("zeros", &self.zeros),
            ("count", &self.count),
            ("T", &self.t),
            ("d", &self.d),
            ("s", &self.s),
            ("y", &self.y),
            ("samples", &self.samples),
            ("output", &self.output),
            ("format", &self.format),
            ("workers", &self.workers),
            ("trials", &self.trials),
            ("kind", &self.kind),
            ("method", &self.method),
            ("a", &self.a),
            ("b", &self.b),
            ("eta", &self.eta),
            ("p", &self.p),
            ("seed", &self.seed),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
        if self.extrapolated {
            map.insert("extrapolated".into(), "true".into());
        }
        Ok(map)
    }
}

/// What a command produced.
pub(crate) struct Outcome {
    pub path: String,
    pub bytes: Vec<u8>,
    pub inputs: Vec<Checksum>,
    pub results: serde_json::Value,
    /// Hard invariants that failed; non-empty means exit status 1.
    pub failures: Vec<String>,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lconv: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, argv: &[OsString]) -> Result<(), CliError> {
    let (name, target) = match &cli.command {
        Command::Sieve => ("sieve", None),
        Command::Convolve => ("convolve", None),
        Command::ZerosEnrich => ("zeros-enrich", None),
        Command::Verify { target } => ("verify", Some(*target)),
        Command::Bench => ("bench", None),
    };
    let cfg = RunConfig::from_map(name, target.map(Target::name), &cli.flags.merged()?, cli.flags.config.clone())?;
    let outcome = with_workers(cfg.workers, || match &cli.command {
        Command::Sieve => commands::sieve(&cfg),
        Command::Convolve => commands::convolve_cmd(&cfg),
        Command::ZerosEnrich => commands::zeros_enrich(&cfg),
        Command::Verify { target } => verify::verify(*target, &cfg),
        Command::Bench => commands::bench(&cfg),
    })?;
    finish(&cfg, argv, outcome)
}

/// Writes the output and its manifest, then reports failed invariants.
fn finish(cfg: &RunConfig, argv: &[OsString], mut outcome: Outcome) -> Result<(), CliError> {
    let manifest_path = if outcome.path == "-" {
        io::stdout().write_all(&outcome.bytes)?;
        io::stdout().flush()?;
        format!("lconv-{}.manifest.json", cfg.target.as_deref().unwrap_or(&cfg.command))
    } else {
        fs::write(&outcome.path, &outcome.bytes)?;
        format!("{}.manifest.json", outcome.path)
    };
    if let Some(path) = &cfg.config_file {
        outcome.inputs.push(Checksum::of(path)?);
    }
    let manifest = Manifest {
        tool: "lconv".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        config: serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null),
        workers: rayon::current_num_threads(),
        inputs: outcome.inputs,
        outputs: vec![Checksum { path: outcome.path.clone(), sha256: sha256_hex(&outcome.bytes) }],
        machine: Machine::current(),
        results: outcome.results,
    };
    manifest.save(&manifest_path)?;
    if outcome.path != "-" {
        eprintln!("wrote {} and {manifest_path}", outcome.path);
    }
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        for f in &outcome.failures {
            eprintln!("FAIL {f}");
        }
        Err(CliError::Invariant(format!("{} check(s) failed", outcome.failures.len())))
    }
}

/// An enriched zero set and the truncation height it should be used with.
pub(crate) struct LoadedZeros {
    pub set: ZeroSet,
    pub t: f64,
    pub checksum: Checksum,
}

/// Reads an enriched cache (detected by its magic) or an ordinate list;
/// ordinates are enriched only up to the requested count or height.
pub(crate) fn load_zeros(path: &Path, truncation: Option<Truncation>) -> Result<LoadedZeros, CliError> {
    let bytes = fs::read(path)?;
    let checksum = Checksum { path: path.display().to_string(), sha256: sha256_hex(&bytes) };
    let set = if bytes.starts_with(b"LCZEROS\0") {
        ZeroSet::from_bytes(&bytes)?
    } else {
        let ordinates = load_ordinates(io::Cursor::new(&bytes))?;
        let needed = match truncation {
            Some(Truncation::Count(k)) if k > ordinates.len() => {
                return Err(CliError::Input(format!("{k} zeros requested but {} has {}", path.display(), ordinates.len())))
            }
            Some(Truncation::Count(k)) => k,
            // one zero above T keeps T inside the stored range
            Some(Truncation::Height(t)) => (ordinates.partition_point(|&g| g <= t) + 1).min(ordinates.len()),
            None => ordinates.len(),
        };
        enrich(&ordinates[..needed], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?
    };
    let t = match truncation {
        Some(Truncation::Count(k)) => set.height_for_count(k)?,
        Some(Truncation::Height(t)) => {
            set.count_up_to(t)?;
            t
        }
        None => set.t_max().max(crate::zeros::MIN_ORDINATE / 2.0),
    };
    Ok(LoadedZeros { set, t, checksum })
}

/// `output` or a default name, with the extension of the format.
pub(crate) fn output_path(cfg: &RunConfig, stem: &str, ext: &str) -> String {
    cfg.output.clone().unwrap_or_else(|| format!("{stem}.{ext}"))
}
