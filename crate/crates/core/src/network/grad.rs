use rayon::prelude::*;

use super::{relu_active, NetworkState, Weights};
use crate::data::DomainPoint;
use crate::error::{Error, Result};
use crate::training::LossKind;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Net {
    Real,
    Pseudo,
}

/// Gradient in `W` of the mean loss of the real network.
///
/// Uses `relu'(z) = 1{z >= 0}`; every column has norm at most `m^(-1/3)` for a
/// 1-Lipschitz loss.
pub fn grad_loss_real(
    state: &NetworkState,
    points: &[DomainPoint],
    labels: &[f64],
    loss: LossKind,
) -> Result<Weights> {
    loss_gradient(state, points, labels, loss, Net::Real)
}

/// Gradient of the mean loss of the pseudo-network; activation pattern frozen at `W0`.
pub fn grad_loss_pseudo(
    state: &NetworkState,
    points: &[DomainPoint],
    labels: &[f64],
    loss: LossKind,
) -> Result<Weights> {
    loss_gradient(state, points, labels, loss, Net::Pseudo)
}

fn loss_gradient(
    state: &NetworkState,
    points: &[DomainPoint],
    labels: &[f64],
    loss: LossKind,
    net: Net,
) -> Result<Weights> {
    if points.is_empty() {
        return Err(Error::Empty("gradient batch"));
    }
    if points.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: labels.len(),
        });
    }
    if let Some(p) = points.iter().find(|p| p.dim() != state.d()) {
        return Err(Error::DimensionMismatch {
            expected: state.d(),
            got: p.dim(),
        });
    }
    let n = points.len() as f64;
    let per_example: Vec<(f64, Vec<bool>)> = points
        .par_iter()
        .zip(labels.par_iter())
        .map(|(p, &y)| {
            let x = p.coords();
            let (out, mask) = match net {
                Net::Real => {
                    let pre = state.preactivations(x);
                    let out = pre
                        .iter()
                        .zip(state.init().a0())
                        .map(|(z, a)| a * z.max(0.0))
                        .sum();
                    (out, pre.into_iter().map(relu_active).collect())
                }
                Net::Pseudo => {
                    let pre0 = state.init().initial_preactivations(x);
                    let (_, g) = state.pair_output(x);
                    (g, pre0.into_iter().map(relu_active).collect())
                }
            };
            (loss.derivative(out, y) / n, mask)
        })
        .collect();

    let (d, m) = (state.d(), state.m());
    let a0 = state.init().a0();
    let rows: Vec<Vec<f64>> = (0..d)
        .into_par_iter()
        .map(|k| {
            let mut row = vec![0.0; m];
            for ((coef, mask), p) in per_example.iter().zip(points) {
                let c = coef * p.coords()[k];
                if c == 0.0 {
                    continue;
                }
                for ((g, &on), a) in row.iter_mut().zip(mask).zip(a0) {
                    if on {
                        *g += c * a;
                    }
                }
            }
            row
        })
        .collect();
    Weights::from_rows(d, m, rows.concat())
}
