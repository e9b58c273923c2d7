//! Diagnostics for how closely the real network tracks its pseudo-network.

use rayon::prelude::*;

use super::{NetworkState, Weights};
use crate::data::DomainPoint;
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

/// `max |f_W(x) - g_W(x)|` over the sample, a lower bound on the supremum over the domain.
pub fn coupling_gap(state: &NetworkState, sample: &[DomainPoint]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Empty("coupling sample"));
    }
    let gaps: Vec<f64> = sample
        .par_iter()
        .map(|x| state.forward_pair(x).map(|(f, g)| (f - g).abs()))
        .collect::<Result<_>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// [`coupling_gap`] and [`activation_flip_count`] in one pass over the sample.
pub fn coupling_scan(state: &NetworkState, sample: &[DomainPoint]) -> Result<(f64, usize)> {
    if sample.is_empty() {
        return Err(Error::Empty("coupling sample"));
    }
    if let Some(p) = sample.iter().find(|p| p.dim() != state.d()) {
        return Err(Error::DimensionMismatch {
            expected: state.d(),
            got: p.dim(),
        });
    }
    let m = state.m();
    let (gap, flipped) = sample
        .par_iter()
        .fold(
            || (0.0_f64, vec![false; m]),
            |(gap, mut acc), p| {
                let x = p.coords();
                let pre0 = state.init().initial_preactivations(x);
                let pre = state.preactivations(x);
                for ((fl, a), b) in acc.iter_mut().zip(&pre0).zip(&pre) {
                    *fl |= (*a >= 0.0) != (*b >= 0.0);
                }
                let (f, g) = state.pair_from_preactivations(&pre, &pre0);
                (gap.max((f - g).abs()), acc)
            },
        )
        .reduce(
            || (0.0, vec![false; m]),
            |(g1, mut a), (g2, b)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                (g1.max(g2), a)
            },
        );
    Ok((gap, flipped.into_iter().filter(|&f| f).count()))
}

/// `sum_r ||g1_r - g2_r||_2`
pub fn gradient_coupling_norm(g1: &Weights, g2: &Weights) -> Result<f64> {
    Ok(g1.sub(g2)?.norms().two_one)
}

/// Neurons whose activation on some point differs between `W` and `W0`.
pub fn activation_flip_count(state: &NetworkState, points: &[DomainPoint]) -> usize {
    let m = state.m();
    let flipped = points
        .par_iter()
        .fold(
            || vec![false; m],
            |mut acc, p| {
                let x = p.coords();
                let pre0 = state.init().initial_preactivations(x);
                let pre = state.preactivations(x);
                for ((f, a), b) in acc.iter_mut().zip(&pre0).zip(&pre) {
                    *f |= (*a >= 0.0) != (*b >= 0.0);
                }
                acc
            },
        )
        .reduce(
            || vec![false; m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    flipped.into_iter().filter(|&f| f).count()
}

/// `W0 + dW` where every column of `dW` has norm exactly `radius * m^(-2/3)` in a
/// uniformly random direction.
pub fn perturb_columns(state: &NetworkState, radius: f64, seed: u64) -> Result<NetworkState> {
    let (d, m) = (state.d(), state.m());
    let norm = radius * (m as f64).powf(-2.0 / 3.0);
    let mut rng = rng::stream(seed, Purpose::Perturbation, m as u64);
    let mut delta = Weights::zeros(d, m);
    for r in 0..m {
        let dir = rng::unit_direction(&mut rng, d);
        for (k, v) in dir.into_iter().enumerate() {
            delta.set(k, r, norm * v);
        }
    }
    state.with_weights(state.init().w0().add(&delta)?)
}
