use serde::{Deserialize, Serialize};

use super::{norm, random_domain_point, Dataset, DomainPoint, BLOCK_RADIUS, LAST_COORD};
use crate::error::{invalid, Error, Result};
use crate::rng::{self, Purpose};

/// Maps raw feature vectors into `X`.
///
/// The whole collection is scaled by one factor so its largest norm is at most
/// `sqrt(3)/2`; each row is then zero-padded, given a fill coordinate that brings
/// the first `d_out - 1` coordinates to norm `sqrt(3)/2`, and closed with `1/2`.
pub fn pad_and_normalize(raw: &[Vec<f64>], d_out: usize) -> Result<Vec<DomainPoint>> {
    let first = raw.first().ok_or(Error::Empty("no rows to normalize"))?;
    let k = first.len();
    if let Some(bad) = raw.iter().find(|r| r.len() != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: bad.len(),
        });
    }
    if d_out < k + 2 {
        return Err(invalid(format!(
            "output dimension {d_out} must be at least raw dimension {k} + 2"
        )));
    }
    if raw.iter().flatten().any(|v| !v.is_finite()) {
        return Err(invalid("raw data contains non-finite values"));
    }
    let max_norm = raw.iter().map(|r| norm(r)).fold(0.0_f64, f64::max);
    let scale = if max_norm > BLOCK_RADIUS {
        BLOCK_RADIUS / max_norm
    } else {
        1.0
    };
    raw.iter()
        .map(|row| {
            let mut coords: Vec<f64> = row.iter().map(|v| v * scale).collect();
            let sq: f64 = coords.iter().map(|v| v * v).sum();
            let fill = (0.75 - sq).max(0.0).sqrt();
            coords.resize(d_out - 2, 0.0);
            coords.push(fill);
            coords.push(LAST_COORD);
            DomainPoint::new(coords)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n: usize,
    pub d: usize,
    pub delta_min: f64,
    pub seed: u64,
    /// Labels to attach; alternating `+1, -1, ...` when absent.
    #[serde(default)]
    pub labels: Option<Vec<f64>>,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_attempts() -> usize {
    200_000
}

impl SynthConfig {
    pub fn new(n: usize, d: usize, delta_min: f64, seed: u64) -> Self {
        Self {
            n,
            d,
            delta_min,
            seed,
            labels: None,
            max_attempts: default_attempts(),
        }
    }
}

pub fn alternating_labels(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Rejection-samples `n` points uniform on `X` with pairwise distance at least `delta_min`.
pub fn synth_separated(cfg: &SynthConfig) -> Result<Dataset> {
    if cfg.n < 2 || cfg.d < 2 {
        return Err(invalid("synthetic data needs n >= 2 and d >= 2"));
    }
    if !(cfg.delta_min > 0.0 && cfg.delta_min < 3f64.sqrt()) {
        return Err(invalid(format!(
            "delta_min must lie in (0, sqrt 3), got {}",
            cfg.delta_min
        )));
    }
    let labels = match &cfg.labels {
        Some(l) if l.len() != cfg.n => {
            return Err(Error::DimensionMismatch {
                expected: cfg.n,
                got: l.len(),
            })
        }
        Some(l) => l.clone(),
        None => alternating_labels(cfg.n),
    };
    let mut rng = rng::stream(cfg.seed, Purpose::Data, 0);
    let mut accepted: Vec<DomainPoint> = Vec::with_capacity(cfg.n);
    let mut attempts = 0;
    while accepted.len() < cfg.n {
        if attempts == cfg.max_attempts {
            return Err(Error::BudgetExhausted {
                attempts,
                accepted: accepted.len(),
                wanted: cfg.n,
            });
        }
        attempts += 1;
        let candidate = random_domain_point(&mut rng, cfg.d);
        if accepted.iter().all(|p| p.distance(&candidate) >= cfg.delta_min) {
            accepted.push(candidate);
        }
    }
    Dataset::new(accepted, labels)
}
