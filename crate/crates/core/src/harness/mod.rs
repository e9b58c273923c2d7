//! Experiment drivers shared by the CLI and the acceptance suite.
//!
//! Every driver is a pure function of its config: parallel cells draw from
//! their own keyed streams and results are assembled in cell order.

pub mod cli;
pub mod output;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{sample_cap, Adversary, AttackConfig};
use crate::data::csvio::{load_dataset, Ingest};
use crate::data::{
    delta_histogram, sample_domain, separability, synth_separated, Dataset, DomainPoint, HistogramBin,
    SeparabilityReport, SynthConfig,
};
use crate::error::{invalid, Error, Result};
use crate::network::{
    anti_concentration_check, coupling_scan, grad_loss_pseudo, grad_loss_real,
    gradient_coupling_norm, init_network, perturb_columns, AntiConcRow, InitSnapshot, NetworkState,
};
use crate::poly::complexity::complexity_measures;
use crate::poly::interpolant::InterpolantInfo;
use crate::poly::sign::compressed_sign_uncertified;
use crate::poly::step::certify_step;
use crate::poly::{robust_interpolant, robust_interpolant_measured, ComplexityReport, Polynomial, RobustInterpolant, StepSpec};
use crate::training::fit::FitSummary;
use crate::training::{
    adversarial_train, default_ridge, fit_pseudo_to_target, robust_loss, schedule, HyperParams, LossKind,
    TraceRow,
};

pub use self::output::{csv_bytes, json_bytes, meta, write_atomic, TOOL_VERSION};

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Where a dataset comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum DataSource {
    Csv {
        path: PathBuf,
        #[serde(default)]
        as_domain: bool,
        #[serde(default)]
        pad_to: Option<usize>,
    },
    Synth(SynthConfig),
}

impl DataSource {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DataSource::Csv { path, as_domain, pad_to } => {
                let ingest = if *as_domain { Ingest::AsDomain } else { Ingest::Pad(*pad_to) };
                load_dataset(path, ingest)
            }
            DataSource::Synth(cfg) => synth_separated(cfg),
        }
    }

    /// Parses `n=20,d=10,delta=0.8[,seed=3]`; the seed defaults to `seed`.
    pub fn parse_synth(spec: &str, seed: u64) -> Result<Self> {
        let (mut n, mut d, mut delta, mut s) = (None, None, None, seed);
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("synthetic spec entry '{part}' is not key=value")))?;
            let bad = || Error::Usage(format!("bad value in synthetic spec entry '{part}'"));
            match key.trim() {
                "n" => n = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "d" => d = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "delta" => delta = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                "seed" => s = value.trim().parse::<u64>().map_err(|_| bad())?,
                other => return Err(Error::Usage(format!("unknown synthetic spec key '{other}'"))),
            }
        }
        match (n, d, delta) {
            (Some(n), Some(d), Some(delta)) => Ok(DataSource::Synth(SynthConfig::new(n, d, delta, s))),
            _ => Err(Error::Usage("synthetic spec needs n, d and delta".into())),
        }
    }
}

// ---------------------------------------------------------------- poly

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyConfig {
    pub delta: f64,
    pub rho: f64,
    pub eps1: f64,
    pub cert_grid: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalCheck {
    pub interval: [f64; 2],
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyCertification {
    /// Interval with the largest error relative to its tolerance.
    pub interval: [f64; 2],
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub grid_points: usize,
    pub checks: Vec<IntervalCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyOutput {
    pub degree: usize,
    /// `q(z) = (1 + z' sum_l c_l T_l(1 - z'^2)) / 2` with `z' = (z - shift) / 2`.
    pub basis: &'static str,
    pub coefficients: Vec<f64>,
    pub shift: f64,
    pub sign_gap: f64,
    pub sign_terms: usize,
    pub compression_degree: usize,
    pub complexity: ComplexityReport,
    pub certification: PolyCertification,
}

/// Builds and certifies the step polynomial; a failed certification is
/// reported in the output rather than as an error.
pub fn run_poly(cfg: &PolyConfig) -> Result<PolyOutput> {
    if cfg.cert_grid < 2 {
        return Err(invalid("certification grid needs at least 2 points"));
    }
    let spec = StepSpec::new(cfg.rho, cfg.delta, cfg.eps1)?;
    let sign = compressed_sign_uncertified(spec.eta_gap(), spec.eps1())?;
    let q = Polynomial::step(sign, spec.alpha_shift());
    let certs = certify_step(&q, &spec, cfg.cert_grid);
    let worst = certs
        .iter()
        .max_by(|a, b| (a.max_error / a.tolerance).total_cmp(&(b.max_error / b.tolerance)))
        .expect("two checks");
    let certification = PolyCertification {
        interval: worst.interval,
        max_error: worst.max_error,
        tolerance: worst.tolerance,
        pass: certs.iter().all(|c| c.pass),
        grid_points: cfg.cert_grid,
        checks: certs
            .iter()
            .map(|c| IntervalCheck {
                interval: c.interval,
                max_error: c.max_error,
                tolerance: c.tolerance,
                pass: c.pass,
            })
            .collect(),
    };
    Ok(PolyOutput {
        degree: q.degree(),
        basis: q.basis(),
        coefficients: q.structured_coeffs(),
        shift: spec.alpha_shift(),
        sign_gap: spec.eta_gap(),
        sign_terms: q.sign_terms().unwrap_or(0),
        compression_degree: q.compression_degree().unwrap_or(0),
        complexity: complexity_measures(&q, cfg.eps1, crate::poly::complexity::DEFAULT_BASE_CONSTANT)?,
        certification,
    })
}

// ---------------------------------------------------------------- separability

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityConfig {
    pub data: DataSource,
    pub rho: f64,
    pub bins: usize,
}

pub fn run_separability(cfg: &SeparabilityConfig) -> Result<(SeparabilityReport, Vec<HistogramBin>)> {
    if cfg.bins == 0 {
        return Err(invalid("histogram needs at least one bin"));
    }
    let ds = cfg.data.load()?;
    let report = separability(&ds, cfg.rho)?;
    let hist = delta_histogram(&report.per_point_delta, cfg.bins);
    Ok((report, hist))
}

// ---------------------------------------------------------------- coupling

fn default_r_list() -> Vec<f64> {
    vec![2.0]
}
fn default_d() -> usize {
    10
}
fn default_samples() -> usize {
    20_000
}
fn default_repeats() -> usize {
    3
}
fn default_grad_batch() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    #[serde(alias = "m")]
    pub m_list: Vec<usize>,
    #[serde(alias = "R", default = "default_r_list")]
    pub r_list: Vec<f64>,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Seeds `seed, seed + 1, ...`.
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    /// Points (the first of the sample, labels alternating) for the gradient comparison.
    #[serde(default = "default_grad_batch")]
    pub grad_batch: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub m: usize,
    #[serde(rename = "R")]
    pub r: f64,
    pub gap_median: f64,
    pub gap_max: f64,
    pub flip_fraction: f64,
    pub grad_ratio_median: f64,
}

struct CouplingCell {
    gap: f64,
    flip_fraction: f64,
    grad_ratio: f64,
}

fn coupling_cell(m: usize, r: f64, cfg: &CouplingConfig, seed: u64, sample: &[DomainPoint]) -> Result<CouplingCell> {
    let state = init_network(m, cfg.d, seed)?;
    let moved = perturb_columns(&state, r, seed)?;
    let (gap, flips) = coupling_scan(&moved, sample)?;
    let batch = &sample[..cfg.grad_batch.min(sample.len())];
    let labels = crate::data::synth::alternating_labels(batch.len());
    let real = grad_loss_real(&moved, batch, &labels, LossKind::Absolute)?;
    let pseudo = grad_loss_pseudo(&moved, batch, &labels, LossKind::Absolute)?;
    let denom = real.norms().two_one;
    Ok(CouplingCell {
        gap,
        flip_fraction: flips as f64 / m as f64,
        grad_ratio: if denom > 0.0 {
            gradient_coupling_norm(&pseudo, &real)? / denom
        } else {
            0.0
        },
    })
}

/// One row per `(m, R)` cell, medians over `repeats` seeds. Each seed uses one
/// sample of `X` shared across widths.
pub fn run_coupling(cfg: &CouplingConfig) -> Result<Vec<CouplingRow>> {
    if cfg.m_list.is_empty() || cfg.r_list.is_empty() {
        return Err(invalid("coupling sweep needs at least one width and one radius"));
    }
    if cfg.repeats == 0 || cfg.samples == 0 || cfg.grad_batch == 0 {
        return Err(invalid("repeats, samples and gradient batch must be positive"));
    }
    let samples: Vec<Vec<DomainPoint>> = (0..cfg.repeats)
        .map(|j| sample_domain(cfg.d, cfg.samples, cfg.seed + j as u64, 0))
        .collect();
    let mut cells = Vec::new();
    for &m in &cfg.m_list {
        for &r in &cfg.r_list {
            for j in 0..cfg.repeats {
                cells.push((m, r, j));
            }
        }
    }
    let results: Vec<CouplingCell> = cells
        .par_iter()
        .map(|&(m, r, j)| coupling_cell(m, r, cfg, cfg.seed + j as u64, &samples[j]))
        .collect::<Result<_>>()?;
    Ok(results
        .chunks(cfg.repeats)
        .zip(cells.chunks(cfg.repeats))
        .map(|(group, keys)| {
            let gaps: Vec<f64> = group.iter().map(|c| c.gap).collect();
            CouplingRow {
                m: keys[0].0,
                r: keys[0].1,
                gap_median: median(&gaps),
                gap_max: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                flip_fraction: median(&group.iter().map(|c| c.flip_fraction).collect::<Vec<_>>()),
                grad_ratio_median: median(&group.iter().map(|c| c.grad_ratio).collect::<Vec<_>>()),
            }
        })
        .collect())
}

// ---------------------------------------------------------------- anticonc

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiConcConfig {
    pub d: usize,
    pub t_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

pub fn run_anticonc(cfg: &AntiConcConfig) -> Result<Vec<AntiConcRow>> {
    let x = sample_domain(cfg.d, 1, cfg.seed, 0)
        .pop()
        .ok_or(Error::Empty("domain sample"))?;
    anti_concentration_check(&x, &cfg.t_grid, cfg.trials, cfg.seed)
}

// ---------------------------------------------------------------- fit

fn default_perturbations() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub data: DataSource,
    pub rho: f64,
    /// Separation used for the step polynomial; measured from the data when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    pub eps: f64,
    #[serde(alias = "m")]
    pub m_list: Vec<usize>,
    #[serde(default = "default_perturbations")]
    pub perturbations: usize,
    /// Defaults to `1e-8` times the sample size.
    #[serde(default)]
    pub ridge: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub m: usize,
    pub max_sample_error: f64,
    pub two_inf: f64,
    /// `||dW||_{2,inf} * m^(2/3)`.
    pub two_inf_scaled: f64,
    pub solver: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitOutcome {
    pub interpolant: InterpolantInfo,
    pub sample_size: usize,
    /// `max_i |f*(x~_i) - y_i|` over the sampled cap perturbations and the points themselves.
    pub cap_max_error: f64,
    pub tolerance: f64,
    pub cap_pass: bool,
    pub rows: Vec<FitRow>,
}

impl FitOutcome {
    pub fn pass(&self) -> bool {
        self.cap_pass && self.rows.iter().all(|r| r.pass)
    }
}

pub fn build_interpolant(ds: &Dataset, rho: f64, delta: Option<f64>, eps: f64) -> Result<RobustInterpolant> {
    match delta {
        Some(delta) => robust_interpolant(ds, rho, delta, eps),
        None => robust_interpolant_measured(ds, rho, eps),
    }
}

/// Training points followed by `per_point` cap samples around each; point `i`
/// draws from stream `i`.
pub fn cap_sample(ds: &Dataset, rho: f64, per_point: usize, seed: u64) -> Vec<(DomainPoint, f64)> {
    ds.points()
        .par_iter()
        .zip(ds.labels().par_iter())
        .enumerate()
        .map(|(i, (x, &y))| {
            let mut v = vec![(x.clone(), y)];
            v.extend(sample_cap(x, rho, per_point, seed, i as u64).into_iter().map(|p| (p, y)));
            v
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn run_fit(cfg: &FitConfig) -> Result<FitOutcome> {
    let ds = cfg.data.load()?;
    let f = build_interpolant(&ds, cfg.rho, cfg.delta, cfg.eps)?;
    let sample = cap_sample(&ds, cfg.rho, cfg.perturbations, cfg.seed);
    let cap_max_error = sample
        .par_iter()
        .map(|(p, y)| (f.eval(p) - y).abs())
        .reduce(|| 0.0, f64::max);
    let points: Vec<DomainPoint> = sample.into_iter().map(|(p, _)| p).collect();
    let ridge = cfg.ridge.unwrap_or_else(|| default_ridge(points.len()));
    let tolerance = f.tolerance();
    let rows = cfg
        .m_list
        .iter()
        .map(|&m| {
            let init = InitSnapshot::generate(m, ds.d(), cfg.seed)?;
            let fit = fit_pseudo_to_target(&init, |p| f.eval(p), &points, ridge)?;
            Ok(FitRow {
                m,
                max_sample_error: fit.max_sample_error,
                two_inf: fit.two_inf,
                two_inf_scaled: fit.deviation_scale(),
                solver: fit.solver.to_string(),
                pass: fit.max_sample_error <= tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FitOutcome {
        interpolant: f.info(),
        sample_size: points.len(),
        cap_max_error,
        tolerance,
        cap_pass: cap_max_error <= tolerance,
        rows,
    })
}

// ---------------------------------------------------------------- train

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Worst,
    Random,
    Identity,
}

impl std::str::FromStr for AttackKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "worst" => Ok(AttackKind::Worst),
            "random" => Ok(AttackKind::Random),
            "identity" => Ok(AttackKind::Identity),
            other => Err(Error::Usage(format!("unknown attack '{other}' (worst, random, identity)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub data: DataSource,
    pub rho: f64,
    pub m: usize,
    pub eps: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub attack: AttackKind,
    pub attack_steps: usize,
    pub attack_restarts: usize,
    pub loss: LossKind,
    #[serde(rename = "c_T")]
    pub c_t: f64,
    pub c_eta: f64,
    pub seed: u64,
    /// Fit `W*` and compare the average robust loss against `L_A(f_W*) + eps`.
    pub regret: bool,
    pub perturbations: usize,
}

impl TrainConfig {
    /// Defaults: absolute loss, `c_T = c_eta = 1`, 20 attack steps, 3 restarts.
    pub fn new(data: DataSource, rho: f64, m: usize, eps: f64, r: f64, seed: u64) -> Self {
        Self {
            data,
            rho,
            m,
            eps,
            r,
            attack: AttackKind::Worst,
            attack_steps: 20,
            attack_restarts: 3,
            loss: LossKind::Absolute,
            c_t: 1.0,
            c_eta: 1.0,
            seed,
            regret: false,
            perturbations: default_perturbations(),
        }
    }

    pub fn adversary(&self) -> Adversary {
        let mut cfg = AttackConfig::new(self.rho, self.seed);
        cfg.steps = self.attack_steps;
        cfg.restarts = self.attack_restarts;
        match self.attack {
            AttackKind::Worst => Adversary::Worst(cfg),
            AttackKind::Random => Adversary::Random(cfg),
            AttackKind::Identity => Adversary::Identity,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegretCheck {
    /// `(1/T) sum_{t<T} L_A(f_W(t))`.
    pub average_robust_loss: f64,
    /// `L_A(f_W*)` under the same adversary.
    pub fitted_robust_loss: f64,
    pub eps: f64,
    pub pass: bool,
    pub fit: FitSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainSummary {
    pub best_t: usize,
    pub best_robust_loss: f64,
    pub hp: HyperParams,
    pub invariant_violations: Vec<String>,
    pub initial_robust_loss: f64,
    pub final_robust_loss: f64,
    /// `best_robust_loss / initial_robust_loss`.
    pub best_to_initial: f64,
    pub separability: SeparabilityReport,
    pub regret: Option<RegretCheck>,
}

pub struct TrainRun {
    pub summary: TrainSummary,
    pub trace: Vec<TraceRow>,
    pub final_state: NetworkState,
}

pub fn run_train(cfg: &TrainConfig) -> Result<TrainRun> {
    let ds = cfg.data.load()?;
    let sep = separability(&ds, cfg.rho)?;
    if !sep.separable {
        return Err(Error::SeparabilityViolation {
            delta: sep.delta,
            rho: cfg.rho,
        });
    }
    let hp = schedule(cfg.eps, cfg.r, cfg.m, cfg.c_t, cfg.c_eta)?;
    let state = init_network(cfg.m, ds.d(), cfg.seed)?;
    let adversary = cfg.adversary();
    let outcome = adversarial_train(&state, &ds, &adversary, cfg.loss, &hp)?;

    let regret = if cfg.regret {
        let f = robust_interpolant_measured(&ds, cfg.rho, cfg.eps)?;
        let points: Vec<DomainPoint> = cap_sample(&ds, cfg.rho, cfg.perturbations, cfg.seed)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let fit = fit_pseudo_to_target(state.init(), |p| f.eval(p), &points, default_ridge(points.len()))?;
        let star = state.with_weights(state.init().w0().add(&fit.delta_w)?)?;
        let fitted = robust_loss(&star, &ds, &adversary, cfg.loss, 0)?;
        let average = outcome.average_robust_loss();
        Some(RegretCheck {
            average_robust_loss: average,
            fitted_robust_loss: fitted,
            eps: cfg.eps,
            pass: average <= fitted + cfg.eps,
            fit: fit.summary(points.len()),
        })
    } else {
        None
    };

    let initial = outcome.trace[0].robust_loss;
    let last = outcome.trace.last().map(|r| r.robust_loss).unwrap_or(initial);
    Ok(TrainRun {
        summary: TrainSummary {
            best_t: outcome.best_t,
            best_robust_loss: outcome.best_robust_loss,
            hp,
            invariant_violations: outcome.invariant_violations,
            initial_robust_loss: initial,
            final_robust_loss: last,
            best_to_initial: outcome.best_robust_loss / initial,
            separability: sep,
            regret,
        },
        trace: outcome.trace,
        final_state: outcome.final_state,
    })
}

// ---------------------------------------------------------------- sweep

fn default_fit_perturbations() -> usize {
    50
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSweepConfig {
    pub n: usize,
    pub d: usize,
    pub delta: Vec<f64>,
    pub m: Vec<usize>,
    pub rho: f64,
    pub eps: f64,
    #[serde(default = "default_fit_perturbations")]
    pub perturbations: usize,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub ridge: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSweepRow {
    pub delta: f64,
    pub m: usize,
    pub cap_error_median: f64,
    pub max_sample_error_median: f64,
    pub two_inf_scaled_median: f64,
}

/// Sweep configuration file: `{"experiment": "coupling" | "fit", ...}` with
/// list-valued widths (and separations for `fit`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum SweepConfig {
    Coupling(CouplingConfig),
    Fit(FitSweepConfig),
}

impl SweepConfig {
    pub fn seed(&self) -> u64 {
        match self {
            SweepConfig::Coupling(c) => c.seed,
            SweepConfig::Fit(c) => c.seed,
        }
    }
}

pub enum SweepRows {
    Coupling(Vec<CouplingRow>),
    Fit(Vec<FitSweepRow>),
}

pub fn run_fit_sweep(cfg: &FitSweepConfig) -> Result<Vec<FitSweepRow>> {
    if cfg.delta.is_empty() || cfg.m.is_empty() || cfg.repeats == 0 {
        return Err(invalid("fit sweep needs separations, widths and repeats"));
    }
    let mut rows = Vec::new();
    for &delta in &cfg.delta {
        let cells: Vec<FitOutcome> = (0..cfg.repeats)
            .into_par_iter()
            .map(|j| {
                let seed = cfg.seed + j as u64;
                run_fit(&FitConfig {
                    data: DataSource::Synth(SynthConfig::new(cfg.n, cfg.d, delta, seed)),
                    rho: cfg.rho,
                    delta: Some(delta),
                    eps: cfg.eps,
                    m_list: cfg.m.clone(),
                    perturbations: cfg.perturbations,
                    ridge: cfg.ridge,
                    seed,
                })
            })
            .collect::<Result<_>>()?;
        for (k, &m) in cfg.m.iter().enumerate() {
            let pick = |f: &dyn Fn(&FitOutcome) -> f64| median(&cells.iter().map(f).collect::<Vec<_>>());
            rows.push(FitSweepRow {
                delta,
                m,
                cap_error_median: pick(&|c| c.cap_max_error),
                max_sample_error_median: pick(&|c| c.rows[k].max_sample_error),
                two_inf_scaled_median: pick(&|c| c.rows[k].two_inf_scaled),
            });
        }
    }
    Ok(rows)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepRows> {
    match cfg {
        SweepConfig::Coupling(c) => run_coupling(c).map(SweepRows::Coupling),
        SweepConfig::Fit(c) => run_fit_sweep(c).map(SweepRows::Fit),
    }
}
