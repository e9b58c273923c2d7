use rayon::prelude::*;
use serde::Serialize;

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SeparabilityReport {
    /// Minimum pairwise distance.
    pub delta: f64,
    /// `delta (delta - 2 rho)`; not positive means the perturbation balls can touch.
    pub gamma: f64,
    pub per_point_delta: Vec<f64>,
    pub rho: f64,
    pub separable: bool,
}

/// Exact pairwise minimum distances.
pub fn separability(ds: &Dataset, rho: f64) -> Result<SeparabilityReport> {
    if ds.n() < 2 {
        return Err(Error::Empty("separability needs at least two points"));
    }
    let points = ds.points();
    let per_point_delta: Vec<f64> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| points[i].distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let delta = per_point_delta.iter().copied().fold(f64::INFINITY, f64::min);
    let gamma = delta * (delta - 2.0 * rho);
    Ok(SeparabilityReport {
        delta,
        gamma,
        per_point_delta,
        rho,
        separable: delta - 2.0 * rho > 0.0,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Uniform bins over `[0, max]`; the maximum lands in the last bin.
pub fn delta_histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let max = values.iter().copied().fold(0.0_f64, f64::max);
    let width = if max > 0.0 { max / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = ((v / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lo: i as f64 * width,
            hi: (i + 1) as f64 * width,
            count,
        })
        .collect()
}
