//! Command-line front end. Exit codes: 0 success, 1 certification or
//! precondition failure, 2 usage error; errors go to stderr as one JSON line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use super::*;

pub const THREADS_ENV: &str = "ROBUST_OVERPARAM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "robust-overparam", version, about = "Robust interpolation with over-parameterized two-layer ReLU networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and certify the step polynomial for (delta, rho, eps1).
    Poly(PolyArgs),
    /// Minimum pairwise distance and per-point nearest-neighbour histogram.
    Separability(SeparabilityArgs),
    /// Real vs pseudo-network gap across widths at fixed deviation scale.
    Coupling(CouplingArgs),
    /// Monte-Carlo check of Pr[|<u,x> + b| <= t].
    Anticonc(AntiConcArgs),
    /// Robust interpolant plus pseudo-network fits across widths.
    Fit(FitArgs),
    /// Adversarial training.
    Train(TrainArgs),
    /// Run a sweep described by a JSON config file.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Dataset CSV with header f0,...,f{k-1},label.
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    data: Option<PathBuf>,
    /// Synthetic separated data, e.g. n=20,d=10,delta=0.8[,seed=3].
    #[arg(long)]
    synth: Option<String>,
    /// CSV rows already lie in the domain; skip padding and normalisation.
    #[arg(long)]
    as_domain: bool,
    /// Target dimension when padding CSV rows (default: features + 2).
    #[arg(long)]
    pad_to: Option<usize>,
}

impl DataArgs {
    fn source(&self, seed: u64) -> Result<DataSource> {
        match (&self.data, &self.synth) {
            (Some(path), None) => Ok(DataSource::Csv {
                path: path.clone(),
                as_domain: self.as_domain,
                pad_to: self.pad_to,
            }),
            (None, Some(spec)) => DataSource::parse_synth(spec, seed),
            _ => Err(Error::Usage("exactly one of --data and --synth is required".into())),
        }
    }
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long)]
    eps1: f64,
    #[arg(long, default_value_t = crate::poly::DEFAULT_CERT_GRID)]
    cert_grid: usize,
    /// Output JSON (stdout when absent).
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeparabilityArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    hist: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CouplingArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    m_list: Vec<usize>,
    #[arg(long = "R", value_delimiter = ',', default_value = "2")]
    r: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    d: usize,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    grad_batch: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AntiConcArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1,0.5")]
    t_grid: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 10)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    rho: f64,
    /// Separation for the step polynomial (default: measured).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, value_delimiter = ',', default_value = "4096")]
    m_list: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    perturbations: usize,
    #[arg(long)]
    ridge: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-width rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0.05)]
    rho: f64,
    #[arg(long, default_value_t = 8192)]
    m: usize,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long = "R", default_value_t = 2.0)]
    r: f64,
    #[arg(long, default_value = "worst")]
    attack: String,
    #[arg(long, default_value_t = 20)]
    attack_steps: usize,
    #[arg(long, default_value_t = 3)]
    attack_restarts: usize,
    /// absolute or huber:<kappa>.
    #[arg(long, default_value = "absolute")]
    loss: String,
    #[arg(long = "c-T", default_value_t = 1.0)]
    c_t: f64,
    #[arg(long, default_value_t = 1.0)]
    c_eta: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also fit W* and run the regret comparison.
    #[arg(long)]
    regret: bool,
    #[arg(long, default_value_t = 200)]
    perturbations: usize,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Final weights as a snapshot JSON.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}

fn emit_json<T: Serialize>(path: Option<&Path>, m: &serde_json::Value, body: &T) -> Result<()> {
    emit(path, &json_bytes(m, body)?)
}

fn emit_csv<T: Serialize>(path: Option<&Path>, m: &serde_json::Value, rows: &[T]) -> Result<()> {
    emit(path, &csv_bytes(m, rows)?)
}

/// Outcome of a successful dispatch: whether every check passed.
type Passed = bool;

fn dispatch(cmd: Command) -> Result<Passed> {
    match cmd {
        Command::Poly(a) => {
            let cfg = PolyConfig {
                delta: a.delta,
                rho: a.rho,
                eps1: a.eps1,
                cert_grid: a.cert_grid,
            };
            let out = run_poly(&cfg)?;
            emit_json(a.emit.as_deref(), &meta("poly", 0, &cfg)?, &out)?;
            Ok(out.certification.pass)
        }
        Command::Separability(a) => {
            let cfg = SeparabilityConfig {
                data: a.data.source(a.seed)?,
                rho: a.rho,
                bins: a.bins,
            };
            let (report, hist) = run_separability(&cfg)?;
            let m = meta("separability", a.seed, &cfg)?;
            if let Some(h) = &a.hist {
                emit_csv(Some(h), &m, &hist)?;
            }
            emit_json(a.out.as_deref(), &m, &report)?;
            Ok(true)
        }
        Command::Coupling(a) => {
            let cfg = CouplingConfig {
                m_list: a.m_list,
                r_list: a.r,
                d: a.d,
                samples: a.samples,
                repeats: a.repeats,
                seed: a.seed,
                grad_batch: a.grad_batch,
            };
            let rows = run_coupling(&cfg)?;
            emit_csv(a.out.as_deref(), &meta("coupling", cfg.seed, &cfg)?, &rows)?;
            Ok(true)
        }
        Command::Anticonc(a) => {
            let cfg = AntiConcConfig {
                d: a.d,
                t_grid: a.t_grid,
                trials: a.trials,
                seed: a.seed,
            };
            let rows = run_anticonc(&cfg)?;
            emit_csv(a.out.as_deref(), &meta("anticonc", cfg.seed, &cfg)?, &rows)?;
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::Fit(a) => {
            let cfg = FitConfig {
                data: a.data.source(a.seed)?,
                rho: a.rho,
                delta: a.delta,
                eps: a.eps,
                m_list: a.m_list,
                perturbations: a.perturbations,
                ridge: a.ridge,
                seed: a.seed,
            };
            let out = run_fit(&cfg)?;
            let m = meta("fit", cfg.seed, &cfg)?;
            if let Some(c) = &a.csv {
                emit_csv(Some(c), &m, &out.rows)?;
            }
            emit_json(a.out.as_deref(), &m, &out)?;
            Ok(out.pass())
        }
        Command::Train(a) => {
            let mut cfg = TrainConfig::new(a.data.source(a.seed)?, a.rho, a.m, a.eps, a.r, a.seed);
            cfg.attack = a.attack.parse()?;
            cfg.attack_steps = a.attack_steps;
            cfg.attack_restarts = a.attack_restarts;
            cfg.loss = a.loss.parse().map_err(|e: Error| Error::Usage(e.to_string()))?;
            cfg.c_t = a.c_t;
            cfg.c_eta = a.c_eta;
            cfg.regret = a.regret;
            cfg.perturbations = a.perturbations;
            let run = run_train(&cfg)?;
            let m = meta("train", cfg.seed, &cfg)?;
            if let Some(t) = &a.trace {
                emit_csv(Some(t), &m, &run.trace)?;
            }
            if let Some(s) = &a.snapshot {
                emit_json(Some(s), &m, &run.final_state.to_snapshot())?;
            }
            emit_json(a.summary.as_deref(), &m, &run.summary)?;
            let regret_ok = run.summary.regret.as_ref().is_none_or(|r| r.pass);
            Ok(run.summary.invariant_violations.is_empty() && regret_ok)
        }
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let cfg: SweepConfig =
                serde_json::from_str(&text).map_err(|e| Error::Usage(format!("sweep config: {e}")))?;
            let m = meta("sweep", cfg.seed(), &cfg)?;
            match run_sweep(&cfg)? {
                SweepRows::Coupling(rows) => emit_csv(a.out.as_deref(), &m, &rows)?,
                SweepRows::Fit(rows) => emit_csv(a.out.as_deref(), &m, &rows)?,
            }
            Ok(true)
        }
    }
}

fn report_error(kind: &str, message: &str, code: i32) -> i32 {
    let record = json!({ "error": kind, "message": message, "exit_code": code });
    eprintln!("{record}");
    code
}

/// Sizes the global worker pool from `ROBUST_OVERPARAM_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    // A pool that already exists (e.g. in tests) keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            return report_error("usage", &e.to_string(), 2);
        }
    };
    if let Err(e) = configure_threads() {
        return report_error(e.kind(), &e.to_string(), e.exit_code());
    }
    match dispatch(cli.command) {
        Ok(true) => 0,
        Ok(false) => report_error("certification_failure", "one or more checks failed; see the output files", 1),
        Err(e) => report_error(e.kind(), &e.to_string(), e.exit_code()),
    }
}
