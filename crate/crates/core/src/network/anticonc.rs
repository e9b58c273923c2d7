//! Monte-Carlo check that `<u, x> + beta` puts `O(t)` mass on `[-t, t]` for
//! `u ~ N(0, I_d)`, `beta ~ N(0, 1)` and a fixed `x` in the domain.

use serde::Serialize;

use crate::data::DomainPoint;
use crate::error::{invalid, Result};
use crate::rng::{self, Purpose};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AntiConcRow {
    pub t: f64,
    pub estimate: f64,
    /// `P(|N(0, 2)| <= t) = erf(t / 2)`
    pub exact: f64,
    pub std_error: f64,
    /// Density envelope `t / sqrt(pi)`.
    pub linear_envelope: f64,
    /// Within five standard errors of the exact value.
    pub pass: bool,
}

pub const MIN_TRIALS: usize = 10_000;

pub fn anti_concentration_check(
    x: &DomainPoint,
    t_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<AntiConcRow>> {
    if trials < MIN_TRIALS {
        return Err(invalid(format!("need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t >= 0.0)) {
        return Err(invalid(format!("thresholds must be non-negative, got {t}")));
    }
    let mut rng = rng::stream(seed, Purpose::AntiConcentration, 0);
    let d = x.dim();
    let values: Vec<f64> = (0..trials)
        .map(|_| {
            let u = rng::normal_vec(&mut rng, d + 1);
            crate::data::dot(&u[..d], x.coords()) + u[d]
        })
        .map(f64::abs)
        .collect();
    Ok(t_grid
        .iter()
        .map(|&t| {
            let hits = values.iter().filter(|v| **v <= t).count();
            let estimate = hits as f64 / trials as f64;
            let exact = libm::erf(t / 2.0);
            let std_error = (exact * (1.0 - exact) / trials as f64).sqrt();
            AntiConcRow {
                t,
                estimate,
                exact,
                std_error,
                linear_envelope: t / std::f64::consts::PI.sqrt(),
                pass: (estimate - exact).abs() <= 5.0 * std_error,
            }
        })
        .collect())
}
