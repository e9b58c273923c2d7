#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_overparam::adversary::input_gradient;
use robust_overparam::data::DomainPoint;
use robust_overparam::network::{grad_loss_pseudo, grad_loss_real, NetworkState};
use robust_overparam::training::LossKind;

pub const FD_STEP: f64 = 1e-6;
pub const FD_REL_TOL: f64 = 1e-5;
pub const MIN_PREACTIVATION: f64 = 1e-3;
/// An exactly-zero analytic entry passes when the difference quotient is below this;
/// a relative error against roundoff noise is meaningless there.
pub const FD_ZERO_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct FdReport {
    pub checked: usize,
    pub worst_rel: f64,
}

impl FdReport {
    pub fn pass(&self, wanted: usize) -> bool {
        self.checked >= wanted && self.worst_rel <= FD_REL_TOL
    }
}

fn rel(fd: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        return if fd.abs() <= FD_ZERO_TOL { 0.0 } else { 1.0 };
    }
    (fd - exact).abs() / fd.abs().max(exact.abs())
}

fn mean_loss(state: &NetworkState, points: &[DomainPoint], labels: &[f64], loss: LossKind, pseudo: bool) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, y)| {
            let out = if pseudo {
                state.pseudo_output(p.coords())
            } else {
                state.real_output(p.coords())
            };
            loss.value(out, *y)
        })
        .sum::<f64>()
        / points.len() as f64
}

/// Central differences of the mean loss in `W` at `count` random coordinates
/// whose neuron is at least `MIN_PREACTIVATION` from its kink on every point.
pub fn fd_weight_gradient(
    state: &NetworkState,
    points: &[DomainPoint],
    labels: &[f64],
    loss: LossKind,
    pseudo: bool,
    count: usize,
    seed: u64,
) -> FdReport {
    let grad = if pseudo {
        grad_loss_pseudo(state, points, labels, loss).unwrap()
    } else {
        grad_loss_real(state, points, labels, loss).unwrap()
    };
    let pres: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            if pseudo {
                state.init().initial_preactivations(p.coords())
            } else {
                state.preactivations(p.coords())
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, m) = (state.d(), state.m());
    let mut report = FdReport {
        checked: 0,
        worst_rel: 0.0,
    };
    let mut tries = 0;
    while report.checked < count && tries < 100 * count {
        tries += 1;
        let (k, r) = (rng.gen_range(0..d), rng.gen_range(0..m));
        if pres.iter().any(|pre| pre[r].abs() < MIN_PREACTIVATION) {
            continue;
        }
        let bump = |h: f64| {
            let mut w = state.weights().clone();
            w.set(k, r, w.get(k, r) + h);
            mean_loss(&state.with_weights(w).unwrap(), points, labels, loss, pseudo)
        };
        let fd = (bump(FD_STEP) - bump(-FD_STEP)) / (2.0 * FD_STEP);
        report.worst_rel = report.worst_rel.max(rel(fd, grad.get(k, r)));
        report.checked += 1;
    }
    report
}

/// Central differences of `l(f(x), y)` in the input at random coordinates of
/// points where every neuron is at least `MIN_PREACTIVATION` from its kink.
pub fn fd_input_gradient(
    state: &NetworkState,
    points: &[DomainPoint],
    labels: &[f64],
    loss: LossKind,
    count: usize,
    seed: u64,
) -> FdReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let usable: Vec<usize> = (0..points.len())
        .filter(|&i| {
            state
                .preactivations(points[i].coords())
                .iter()
                .all(|z| z.abs() >= MIN_PREACTIVATION)
        })
        .collect();
    let mut report = FdReport {
        checked: 0,
        worst_rel: 0.0,
    };
    if usable.is_empty() {
        return report;
    }
    for _ in 0..count {
        let i = usable[rng.gen_range(0..usable.len())];
        let k = rng.gen_range(0..state.d());
        let x = points[i].coords();
        let g = input_gradient(state, x, labels[i], loss).unwrap();
        let at = |h: f64| {
            let mut z = x.to_vec();
            z[k] += h;
            loss.value(state.real_output(&z), labels[i])
        };
        let fd = (at(FD_STEP) - at(-FD_STEP)) / (2.0 * FD_STEP);
        report.worst_rel = report.worst_rel.max(rel(fd, g[k]));
        report.checked += 1;
    }
    report
}

pub fn alternating(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}
