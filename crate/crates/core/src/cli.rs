//! The `pqbench` command line: `sizes`, `bench`, `kat` and `compare`.
//!
//! Exit codes: 0 success, 1 verification or measurement failure, 2 usage or
//! parse error, 3 backend divergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::bench::{
    self, bench_classical, bench_pqc, bench_pqc_interleaved, equivalence_gate, render_views, BenchReport, CampaignConfig, ClockHz, Equivalence,
    Format, Shape, Timer, DEFAULT_ITERATIONS, WARMUP_ITERATIONS,
};
use crate::classical::{probe_provider, ProviderHandle, RsaPolicy};
use crate::kat::{self, KatError};
use crate::{Backend, Error, PqcScheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
    #[error("{0}")]
    Divergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
            CliError::Divergence(_) => EXIT_DIVERGENCE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::InvalidClock(_) | Error::BackendUnavailable => {
                CliError::Usage(e.to_string())
            }
            Error::BackendDivergence { .. } => CliError::Divergence(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pqbench", version, about = "Kyber and Dilithium benchmarks, KAT replay and classical comparisons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print key, ciphertext and signature sizes of every parameter set.
    Sizes,
    /// Benchmark Kyber and/or Dilithium on the selected backends.
    Bench(BenchArgs),
    /// Replay a known-answer response file.
    Kat(KatArgs),
    /// Compare total times of post-quantum and classical schemes.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    All,
    Reference,
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimerChoice {
    /// Time-stamp counter, converted to milliseconds at the clock rate.
    Cycles,
    /// Monotonic nanoseconds; the clock rate is ignored.
    Nanos,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Timed invocations per operation.
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub iters: usize,
    /// Untimed invocations before recording.
    #[arg(long, default_value_t = WARMUP_ITERATIONS)]
    pub warmup: usize,
    /// Clock rate used to convert cycles to milliseconds.
    #[arg(long, env = "PQBENCH_CLOCK_GHZ", default_value_t = bench::DEFAULT_CLOCK_GHZ)]
    pub clock_ghz: f64,
    #[arg(long, value_enum, default_value_t = TimerChoice::Cycles)]
    pub timer: TimerChoice,
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for per-iteration inputs; drawn from the OS when absent.
    #[arg(long)]
    pub input_seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// kyber, dilithium, all, or a parameter set such as kyber768.
    #[arg(long, default_value = "all")]
    pub alg: String,
    /// Comma-separated levels, e.g. 512,768 or 2,5.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<u32>,
    #[arg(long, value_enum, default_value_t = BackendChoice::All)]
    pub backend: BackendChoice,
    /// Shared seeds for the equivalence gate run before timing.
    #[arg(long, default_value_t = 100)]
    pub gate_seeds: usize,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KatArgs {
    /// Parameter set, e.g. kyber512 or dilithium3.
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendChoice::Reference)]
    pub backend: BackendChoice,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Operations summed into an RSA total: encrypt-decrypt, sign-verify or all.
    #[arg(long, default_value = "encrypt-decrypt")]
    pub rsa_policy: String,
    /// Skip the classical provider, as on a host without one.
    #[arg(long)]
    pub no_provider: bool,
    #[command(flatten)]
    pub measure: MeasureArgs,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_algs(alg: &str, levels: &[u32]) -> Result<Vec<PqcScheme>, CliError> {
    let family: Vec<PqcScheme> = match alg.to_ascii_lowercase().as_str() {
        "all" => PqcScheme::ALL.to_vec(),
        f @ ("kyber" | "dilithium") => PqcScheme::ALL.into_iter().filter(|s| s.family() == f).collect(),
        single => vec![single.parse::<PqcScheme>().map_err(usage)?],
    };
    if levels.is_empty() {
        return Ok(family);
    }
    for l in levels {
        if !family.iter().any(|s| s.level_number() == *l) {
            return Err(usage(format!("level {l} does not exist for {alg}")));
        }
    }
    Ok(family.into_iter().filter(|s| levels.contains(&s.level_number())).collect())
}

fn campaign(m: &MeasureArgs, rsa_policy: RsaPolicy) -> Result<(CampaignConfig, Format), CliError> {
    if m.iters == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    let format: Format = m.format.parse().map_err(usage)?;
    let cfg = CampaignConfig {
        iterations: m.iters,
        warmup: m.warmup,
        clock: ClockHz::from_ghz(m.clock_ghz).map_err(usage)?,
        timer: match m.timer {
            TimerChoice::Cycles => Timer::detect(),
            TimerChoice::Nanos => Timer::nanos(),
        },
        rsa_policy,
        input_seed: m.input_seed,
    };
    Ok((cfg, format))
}

fn emit(text: &str, out_path: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Failure(e.to_string())),
    }
}

pub fn cmd_sizes(stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    for s in PqcScheme::ALL {
        let sizes: Vec<String> = s.sizes().iter().map(|(l, n)| format!("{l}={n}")).collect();
        let mut line = format!("{} {}", s.name(), sizes.join(" "));
        if let PqcScheme::Dilithium(l) = s {
            line.push_str(&format!(" sk={}", l.params().secret_key_bytes()));
        }
        text.push_str(&line);
        text.push('\n');
    }
    emit(&text, &None, stdout)
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let schemes = parse_algs(&args.alg, &args.levels)?;
    let (cfg, format) = campaign(&args.measure, RsaPolicy::default())?;
    let accelerated = Backend::Accelerated.is_available();
    let backends: Vec<Backend> = match args.backend {
        BackendChoice::Reference => vec![Backend::Reference],
        BackendChoice::Accelerated if !accelerated => {
            return Err(usage("the accelerated backend is not available on this CPU"))
        }
        BackendChoice::Accelerated => vec![Backend::Accelerated],
        BackendChoice::All if accelerated => vec![Backend::Reference, Backend::Accelerated],
        BackendChoice::All => {
            let _ = writeln!(stderr, "note: no vector acceleration on this CPU; speedups unavailable");
            vec![Backend::Reference]
        }
    };
    let mut proofs: Vec<Equivalence> = Vec::new();
    let mut reports: Vec<BenchReport> = Vec::new();
    let mut gate_rng = StdRng::seed_from_u64(cfg.input_seed.unwrap_or(0x5eed));
    for &scheme in &schemes {
        if backends.len() == 2 {
            proofs.push(equivalence_gate(scheme, args.gate_seeds, &mut gate_rng)?);
        }
        reports.extend(bench_pqc_interleaved(scheme, &backends, &cfg)?);
    }
    let mut views = bench::views(&reports, &proofs, Shape::Table1)?;
    views.extend(bench::views(&reports, &proofs, Shape::Table2)?);
    let shape = if schemes.iter().all(|s| s.family() == "dilithium") {
        Shape::Table2
    } else {
        Shape::Table1
    };
    emit(&render_views(&views, shape, format)?, &args.measure.out, stdout)
}

fn kat_error(e: KatError) -> CliError {
    match e {
        KatError::Parse { .. } | KatError::Empty | KatError::Record { .. } => CliError::Usage(e.to_string()),
        KatError::Scheme(inner) => inner.into(),
    }
}

pub fn cmd_kat(args: &KatArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let scheme: PqcScheme = args.scheme.parse().map_err(usage)?;
    let text = std::fs::read_to_string(&args.file).map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
    let backends = match args.backend {
        BackendChoice::Reference => vec![Backend::Reference],
        BackendChoice::Accelerated => vec![Backend::Accelerated],
        BackendChoice::All => Backend::ALL.into_iter().filter(|b| b.is_available()).collect(),
    };
    let mut failed = None;
    for backend in backends {
        let summary = kat::run(&text, scheme, backend).map_err(kat_error)?;
        emit(&format!("{summary} [{backend}]\n"), &None, stdout)?;
        if !summary.all_passed() && failed.is_none() {
            failed = Some(summary.to_string());
        }
    }
    match failed {
        Some(s) => Err(CliError::Failure(s)),
        None => Ok(()),
    }
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let policy: RsaPolicy = args.rsa_policy.parse().map_err(usage)?;
    let (cfg, format) = campaign(&args.measure, policy)?;
    let handle = if args.no_provider {
        ProviderHandle::unavailable()
    } else {
        probe_provider()
    };
    let mut reports = Vec::new();
    for scheme in PqcScheme::ALL {
        reports.push(bench_pqc(scheme, Backend::Reference, &cfg)?);
    }
    for scheme in crate::classical::ClassicalScheme::ALL {
        reports.push(bench_classical(&handle, scheme, &cfg));
    }
    let views = bench::views(&reports, &[], Shape::Table3)?;
    emit(&render_views(&views, Shape::Table3, format)?, &args.measure.out, stdout)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Sizes => cmd_sizes(stdout),
        Command::Bench(a) => cmd_bench(a, stdout, stderr),
        Command::Kat(a) => cmd_kat(a, stdout),
        Command::Compare(a) => cmd_compare(a, stdout),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("pqbench").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sizes_lists_every_set() {
        let (code, out, _) = run_capture(&["sizes"]);
        assert_eq!(code, 0);
        assert!(out.contains("kyber1024 sk=3168 pk=1568 ct=1568"));
        assert!(out.contains("dilithium3 pk=1952 sig=3293"));
        assert_eq!(out.lines().count(), 6);
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [
            &["bench", "--alg", "nosuch"][..],
            &["bench", "--alg", "kyber", "--levels", "2"],
            &["bench", "--iters", "0"],
            &["bench", "--clock-ghz", "0"],
            &["bench", "--format", "xml"],
            &["frobnicate"],
        ] {
            let (code, _, err) = run_capture(args);
            assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn level_selection() {
        let s = parse_algs("kyber", &[512, 1024]).unwrap();
        assert_eq!(s.iter().map(|s| s.level_number()).collect::<Vec<_>>(), [512, 1024]);
        assert_eq!(parse_algs("dilithium2", &[]).unwrap().len(), 1);
        assert_eq!(parse_algs("all", &[]).unwrap().len(), 6);
    }
}
