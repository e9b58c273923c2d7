//! Least-squares fit of the pseudo-network to a target function.
//!
//! Updates are restricted to the last row of `W`: with `dW_r = c_r e_d` the
//! pseudo-network becomes `g(x) = sum_r c_r phi_r(x)` with
//! `phi_r(x) = a0_r * x_d * 1{<W0_r, x> + b0_r >= 0}` and `x_d = 1/2`,
//! so fitting is a ridge regression over `c`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{DomainPoint, LAST_COORD};
use crate::error::{invalid, Error, Result};
use crate::network::{relu_active, InitSnapshot, Weights};

#[derive(Clone, Debug)]
pub struct FitReport {
    /// `d x m`, nonzero only in the last row.
    pub delta_w: Weights,
    pub max_sample_error: f64,
    pub two_inf: f64,
    pub ridge: f64,
    pub solver: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    pub max_sample_error: f64,
    pub two_inf: f64,
    pub two_inf_scaled: f64,
    pub ridge: f64,
    pub solver: &'static str,
    pub sample_size: usize,
}

impl FitReport {
    /// `||dW||_{2,inf} * m^(2/3)`, the deviation scale `R` the fit needs.
    pub fn deviation_scale(&self) -> f64 {
        self.two_inf * (self.delta_w.m() as f64).powf(2.0 / 3.0)
    }

    pub fn summary(&self, sample_size: usize) -> FitSummary {
        FitSummary {
            max_sample_error: self.max_sample_error,
            two_inf: self.two_inf,
            two_inf_scaled: self.deviation_scale(),
            ridge: self.ridge,
            solver: self.solver,
            sample_size,
        }
    }
}

/// Default ridge: `1e-8` times the sample size.
pub fn default_ridge(sample_size: usize) -> f64 {
    1e-8 * sample_size as f64
}

/// Activation patterns at initialisation, one bit per neuron (or per point).
struct BitRows {
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            words,
            bits: vec![0; rows * words],
        }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words + col / 64] |= 1 << (col % 64);
    }

    fn row(&self, row: usize) -> &[u64] {
        &self.bits[row * self.words..(row + 1) * self.words]
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.row(row)[col / 64] >> (col % 64) & 1 == 1
    }

    fn overlap(&self, i: usize, j: usize) -> u32 {
        self.row(i).iter().zip(self.row(j)).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn count(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }
}

/// Symmetric `k x k` matrix of pairwise overlaps, filled in parallel.
fn overlap_gram(rows: &BitRows, k: usize) -> DMatrix<f64> {
    let upper: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| (i..k).map(|j| rows.overlap(i, j) as f64).collect())
        .collect();
    let mut g = DMatrix::zeros(k, k);
    for (i, row) in upper.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            g[(i, i + off)] = *v;
            g[(i + off, i)] = *v;
        }
    }
    g
}

fn solve_spd(mut a: DMatrix<f64>, rhs: DVector<f64>, ridge: f64) -> Result<DVector<f64>> {
    let n = a.nrows();
    let mut lambda = ridge;
    for _ in 0..8 {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] += lambda;
        }
        if let Some(ch) = shifted.cholesky() {
            return Ok(ch.solve(&rhs));
        }
        lambda = if lambda > 0.0 { lambda * 10.0 } else { 1e-12 };
    }
    for i in 0..n {
        a[(i, i)] += ridge;
    }
    a.lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DegenerateFit("normal equations are singular".into()))
}

/// Ridge-regularised least squares of the pseudo-network against `target` on
/// `sample`, over updates confined to the last row of `W`.
///
/// Solves the `N x N` dual system when the sample is no larger than the width,
/// otherwise the `m x m` primal one; both are Cholesky factorisations of the
/// regularised Gram matrix.
pub fn fit_pseudo_to_target<F>(
    init: &InitSnapshot,
    target: F,
    sample: &[DomainPoint],
    ridge: f64,
) -> Result<FitReport>
where
    F: Fn(&DomainPoint) -> f64 + Sync,
{
    if sample.is_empty() {
        return Err(Error::Empty("fit sample"));
    }
    if !(ridge >= 0.0) || !ridge.is_finite() {
        return Err(invalid(format!("ridge must be finite and non-negative, got {ridge}")));
    }
    let (m, d) = (init.m(), init.d());
    if let Some(p) = sample.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.dim(),
        });
    }
    let n = sample.len();
    let y: Vec<f64> = sample.par_iter().map(&target).collect();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(invalid("target is not finite on the sample"));
    }
    let patterns: Vec<Vec<bool>> = sample
        .par_iter()
        .map(|p| init.initial_preactivations(p.coords()).into_iter().map(relu_active).collect())
        .collect();

    let mut by_point = BitRows::new(n, m);
    for (i, pat) in patterns.iter().enumerate() {
        for (r, &on) in pat.iter().enumerate() {
            if on {
                by_point.set(i, r);
            }
        }
    }
    if (0..n).all(|i| by_point.count(i) == 0) {
        return Err(Error::DegenerateFit("every feature is zero on the sample".into()));
    }

    let a0 = init.a0();
    let half = LAST_COORD;
    let c: Vec<f64> = if n <= m {
        // K_ij = sum_r phi_r(x_i) phi_r(x_j) = (a^2 / 4) * overlap, as every |a_r| is equal.
        let a2 = a0[0] * a0[0] * half * half;
        let k = overlap_gram(&by_point, n) * a2;
        let alpha = solve_spd(k, DVector::from_vec(y.clone()), ridge)?;
        (0..m)
            .into_par_iter()
            .map(|r| {
                let s: f64 = (0..n).filter(|&i| by_point.get(i, r)).map(|i| alpha[i]).sum();
                a0[r] * half * s
            })
            .collect()
    } else {
        let mut by_neuron = BitRows::new(m, n);
        for (i, pat) in patterns.iter().enumerate() {
            for (r, &on) in pat.iter().enumerate() {
                if on {
                    by_neuron.set(r, i);
                }
            }
        }
        let mut g = overlap_gram(&by_neuron, m);
        for r in 0..m {
            for s in 0..m {
                g[(r, s)] *= a0[r] * a0[s] * half * half;
            }
        }
        let rhs: Vec<f64> = (0..m)
            .map(|r| {
                let s: f64 = (0..n).filter(|&i| by_neuron.get(r, i)).map(|i| y[i]).sum();
                a0[r] * half * s
            })
            .collect();
        solve_spd(g, DVector::from_vec(rhs), ridge)?.iter().copied().collect()
    };

    let max_sample_error = patterns
        .par_iter()
        .zip(y.par_iter())
        .map(|(pat, yi)| {
            let g: f64 = pat
                .iter()
                .zip(&c)
                .zip(a0)
                .filter(|((on, _), _)| **on)
                .map(|((_, cr), a)| a * cr * half)
                .sum();
            (g - yi).abs()
        })
        .reduce(|| 0.0, f64::max);

    let mut delta_w = Weights::zeros(d, m);
    delta_w.row_mut(d - 1).copy_from_slice(&c);
    let two_inf = c.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));

    Ok(FitReport {
        delta_w,
        max_sample_error,
        two_inf,
        ridge,
        solver: if n <= m { "dual" } else { "primal" },
    })
}
