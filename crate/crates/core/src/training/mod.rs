//! Adversarial training (full-batch gradient descent on adversarially
//! perturbed examples), robust-loss evaluation and the pseudo-network fit.

pub mod fit;
pub mod loss;

use serde::{Deserialize, Serialize};

use crate::adversary::Adversary;
use crate::data::{Dataset, DomainPoint};
use crate::error::{invalid, Error, Result};
use crate::network::{grad_loss_real, output_scale, NetworkState};

pub use self::fit::{default_ridge, fit_pseudo_to_target, FitReport};
pub use self::loss::LossKind;

/// Slack allowed on the drift and gradient-size invariants.
pub const INVARIANT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    #[serde(rename = "T")]
    pub t: usize,
    pub eta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub eps: f64,
    #[serde(rename = "c_T")]
    pub c_t: f64,
    pub c_eta: f64,
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 {
            return Err(invalid("T must be at least 1"));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(invalid(format!("step size must be finite and non-negative, got {}", self.eta)));
        }
        Ok(())
    }
}

/// `T = ceil(c_T R^2 / eps^2)`, `eta = c_eta eps m^(-1/3)`.
pub fn schedule(eps: f64, r: f64, m: usize, c_t: f64, c_eta: f64) -> Result<HyperParams> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(r >= 1.0) {
        return Err(invalid(format!("R must be at least 1, got {r}")));
    }
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    if !(c_t > 0.0 && c_eta > 0.0) {
        return Err(invalid("schedule constants must be positive"));
    }
    // Round away representation noise so that e.g. 4 / 0.01 gives 400, not 401.
    let raw = c_t * r * r / (eps * eps);
    let t = (raw * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok(HyperParams {
        t,
        eta: c_eta * eps * output_scale(m),
        r,
        eps,
        c_t,
        c_eta,
    })
}

fn mean_loss(state: &NetworkState, points: &[DomainPoint], labels: &[f64], loss: LossKind) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let outputs = state.forward_real_batch(points)?;
    let total: f64 = outputs.iter().zip(labels).map(|(f, y)| loss.value(*f, *y)).sum();
    Ok(total / points.len() as f64)
}

/// Mean loss over the dataset.
pub fn standard_loss(state: &NetworkState, ds: &Dataset, loss: LossKind) -> Result<f64> {
    mean_loss(state, ds.points(), ds.labels(), loss)
}

/// Mean loss on the adversary's outputs; `round` keys the adversary's random streams.
pub fn robust_loss(
    state: &NetworkState,
    ds: &Dataset,
    adversary: &Adversary,
    loss: LossKind,
    round: u64,
) -> Result<f64> {
    let perturbed = adversary.perturb_dataset(state, ds, loss, round)?;
    mean_loss(state, &perturbed, ds.labels(), loss)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub robust_loss: f64,
    pub standard_loss: f64,
    /// `||W(t) - W0||_{2,inf}`.
    pub drift_2inf: f64,
    /// `||grad||_{2,1}` of the real-network gradient at `W(t)`.
    pub grad_21: f64,
    /// `max |f - g|` over the clean and perturbed training points.
    pub coupling_sample: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    /// Rows for `t = 0..=T`; the last row is the final iterate, never stepped from.
    pub trace: Vec<TraceRow>,
    pub best_t: usize,
    pub best_robust_loss: f64,
    pub final_state: NetworkState,
    pub invariant_violations: Vec<String>,
}

impl TrainOutcome {
    /// `(1/T) sum_{t<T} L_A(f_{W(t)})`.
    pub fn average_robust_loss(&self) -> f64 {
        let steps = &self.trace[..self.trace.len() - 1];
        steps.iter().map(|r| r.robust_loss).sum::<f64>() / steps.len() as f64
    }
}

/// Each iteration attacks every example against the current network, then takes one
/// full-batch gradient step on the attacked set, which is held constant.
///
/// Drift `||W(t) - W0||_{2,inf} <= eta t m^(-1/3)` and per-column gradient norms
/// `<= m^(-1/3)` are checked at every iteration; breaches are collected, not fatal.
pub fn adversarial_train(
    state: &NetworkState,
    ds: &Dataset,
    adversary: &Adversary,
    loss: LossKind,
    hp: &HyperParams,
) -> Result<TrainOutcome> {
    hp.validate()?;
    if ds.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if ds.d() != state.d() {
        return Err(Error::DimensionMismatch {
            expected: state.d(),
            got: ds.d(),
        });
    }
    let scale = output_scale(state.m());
    let mut current = state.clone();
    let mut trace = Vec::with_capacity(hp.t + 1);
    let mut violations = Vec::new();

    for t in 0..=hp.t {
        let attacked = adversary.perturb_dataset(&current, ds, loss, t as u64)?;
        let robust = mean_loss(&current, &attacked, ds.labels(), loss)?;
        let standard = standard_loss(&current, ds, loss)?;

        let drift = current.drift().two_inf;
        let drift_bound = hp.eta * t as f64 * scale + INVARIANT_TOL;
        if drift > drift_bound {
            violations.push(format!("t={t}: drift {drift:e} exceeds {drift_bound:e}"));
        }

        let grad = grad_loss_real(&current, &attacked, ds.labels(), loss)?;
        let max_col = grad.column_norms().into_iter().fold(0.0_f64, f64::max);
        if max_col > scale + INVARIANT_TOL {
            violations.push(format!("t={t}: gradient column norm {max_col:e} exceeds {scale:e}"));
        }

        let coupling = attacked
            .iter()
            .chain(ds.points())
            .map(|p| {
                let (f, g) = current.pair_output(p.coords());
                (f - g).abs()
            })
            .fold(0.0_f64, f64::max);

        trace.push(TraceRow {
            t,
            robust_loss: robust,
            standard_loss: standard,
            drift_2inf: drift,
            grad_21: grad.norms().two_one,
            coupling_sample: coupling,
        });

        if t < hp.t {
            let next = current.weights().add_scaled(-hp.eta, &grad)?;
            current = current.with_weights(next)?;
        }
    }

    let (best_t, best_robust_loss) = trace
        .iter()
        .map(|r| (r.t, r.robust_loss))
        .fold((0, f64::INFINITY), |acc, (t, l)| if l < acc.1 { (t, l) } else { acc });

    Ok(TrainOutcome {
        trace,
        best_t,
        best_robust_loss,
        final_state: current,
        invariant_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AttackConfig;
    use crate::data::synth::{synth_separated, SynthConfig};
    use crate::network::init_network;

    #[test]
    fn schedule_examples() {
        assert_eq!(schedule(0.5, 1.0, 10, 1.0, 1.0).unwrap().t, 4);
        assert_eq!(schedule(0.1, 2.0, 10, 1.0, 1.0).unwrap().t, 400);
        let hp = schedule(0.1, 1.0, 1_000_000, 1.0, 1.0).unwrap();
        assert!((hp.eta - 1e-3).abs() < 1e-15);
        assert!(schedule(1.0, 1.0, 10, 1.0, 1.0).is_err());
        assert!(schedule(0.5, 0.5, 10, 1.0, 1.0).is_err());
    }

    #[test]
    fn standard_loss_examples() {
        let state = init_network(64, 4, 5).unwrap();
        let pts = crate::data::sample_domain(4, 6, 5, 0);
        let labels = state.forward_real_batch(&pts).unwrap();
        let ds = Dataset::new(pts.clone(), labels).unwrap();
        assert_eq!(standard_loss(&state, &ds, LossKind::Absolute).unwrap(), 0.0);

        let labels: Vec<f64> = (0..6).map(|i| if i % 2 == 0 { 1.0 } else { -0.5 }).collect();
        let ds = Dataset::new(pts.clone(), labels.clone()).unwrap();
        let naive = pts
            .iter()
            .zip(&labels)
            .rev()
            .map(|(p, y)| (state.forward_real(p).unwrap() - y).abs())
            .fold(0.0, |a, b| a + b)
            / 6.0;
        assert!((standard_loss(&state, &ds, LossKind::Absolute).unwrap() - naive).abs() < 1e-12);
        let identity = robust_loss(&state, &ds, &Adversary::Identity, LossKind::Absolute, 0).unwrap();
        assert_eq!(identity, standard_loss(&state, &ds, LossKind::Absolute).unwrap());
    }

    #[test]
    fn zero_step_keeps_weights() {
        let ds = synth_separated(&SynthConfig::new(4, 5, 0.8, 2)).unwrap();
        let state = init_network(128, 5, 2).unwrap();
        let hp = HyperParams {
            t: 3,
            eta: 0.0,
            r: 1.0,
            eps: 0.5,
            c_t: 1.0,
            c_eta: 1.0,
        };
        let out = adversarial_train(&state, &ds, &Adversary::Identity, LossKind::Absolute, &hp).unwrap();
        assert_eq!(out.trace.len(), 4);
        assert!(out.trace.iter().all(|r| r.drift_2inf == 0.0));
        assert_eq!(out.final_state.weights(), state.weights());
        assert!(out.invariant_violations.is_empty());
    }

    #[test]
    fn drift_bound_and_worst_case_dominance() {
        let ds = synth_separated(&SynthConfig::new(6, 5, 0.8, 3)).unwrap();
        let state = init_network(256, 5, 3).unwrap();
        let hp = schedule(0.5, 1.0, 256, 1.0, 1.0).unwrap();
        let adv = Adversary::Worst(AttackConfig::new(0.05, 3));
        let out = adversarial_train(&state, &ds, &adv, LossKind::Absolute, &hp).unwrap();
        assert!(out.invariant_violations.is_empty(), "{:?}", out.invariant_violations);
        for row in &out.trace {
            assert!(row.robust_loss >= row.standard_loss - 1e-12);
        }
        let last = out.trace.last().unwrap();
        assert!(last.drift_2inf <= hp.eta * hp.t as f64 * output_scale(256) + INVARIANT_TOL);
    }
}
