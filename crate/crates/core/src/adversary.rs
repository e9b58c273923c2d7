//! `rho`-bounded adversaries on `B_2(x, rho) ∩ X`.
//!
//! The worst-case adversary is approximated by multi-restart projected
//! gradient ascent on the loss. Each restart draws from its own keyed stream,
//! so adding restarts never changes the earlier ones.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{distance, dot, norm, Dataset, DomainPoint, BLOCK_RADIUS};
use crate::error::{invalid, Error, Result};
use crate::network::NetworkState;
use crate::rng::{self, Purpose};
use crate::training::LossKind;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub rho: f64,
    pub steps: usize,
    pub step_size: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl AttackConfig {
    /// 20 steps of size `rho / 5`, 3 restarts.
    pub fn new(rho: f64, seed: u64) -> Self {
        Self {
            rho,
            steps: 20,
            step_size: rho / 5.0,
            restarts: 3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) {
            return Err(invalid(format!("rho must be positive, got {}", self.rho)));
        }
        if self.restarts == 0 {
            return Err(invalid("restarts must be at least 1"));
        }
        if !(self.step_size >= 0.0) {
            return Err(invalid("step size must be non-negative"));
        }
        Ok(())
    }
}

/// Tolerance on the ball constraint of projected points.
pub const BALL_TOL: f64 = 1e-9;
const MAX_PROJECTION_ROUNDS: usize = 50;

/// Gradient of `l(f(x), y)` in `x`: `l'(f(x), y) * sum_r a_r W_r 1{<W_r, x> + b_r >= 0}`.
pub fn input_gradient(state: &NetworkState, x: &[f64], y: f64, loss: LossKind) -> Result<Vec<f64>> {
    if x.len() != state.d() {
        return Err(Error::DimensionMismatch {
            expected: state.d(),
            got: x.len(),
        });
    }
    let pre = state.preactivations(x);
    let a0 = state.init().a0();
    let f: f64 = pre.iter().zip(a0).map(|(z, a)| a * z.max(0.0)).sum();
    let coef = loss.derivative(f, y);
    let w = state.weights();
    Ok((0..state.d())
        .map(|k| {
            if coef == 0.0 {
                return 0.0;
            }
            let s: f64 = w
                .row(k)
                .iter()
                .zip(&pre)
                .zip(a0)
                .filter(|((_, z), _)| **z >= 0.0)
                .map(|((wv, _), a)| a * wv)
                .sum();
            coef * s
        })
        .collect())
}

/// Nearest point of `B_2(center, rho) ∩ X` along the sphere: fix the last
/// coordinate, renormalise the block, then rotate toward the center along the
/// great circle until the ball constraint binds.
pub fn project_to_cap(z: &[f64], center: &DomainPoint, rho: f64) -> DomainPoint {
    let d = center.dim();
    if z.len() != d || z.iter().any(|v| !v.is_finite()) {
        return center.clone();
    }
    let c = center.block();
    let theta_max = if rho >= 2.0 * BLOCK_RADIUS {
        std::f64::consts::PI
    } else {
        2.0 * (rho / (2.0 * BLOCK_RADIUS)).asin()
    };
    let mut block = z[..d - 1].to_vec();
    for _ in 0..MAX_PROJECTION_ROUNDS {
        let n = norm(&block);
        if !(n > 1e-300) {
            return center.clone();
        }
        block.iter_mut().for_each(|v| *v *= BLOCK_RADIUS / n);
        if distance(&block, c) <= rho + BALL_TOL {
            break;
        }
        block = rotate_toward(c, &block, theta_max);
    }
    match DomainPoint::from_block(&block) {
        Ok(p) if p.distance(center) <= rho + BALL_TOL => p,
        _ => center.clone(),
    }
}

/// The point at angle `theta` from `from` on the great circle through `from` and `to`.
fn rotate_toward(from: &[f64], to: &[f64], theta: f64) -> Vec<f64> {
    let u: Vec<f64> = from.iter().map(|v| v / BLOCK_RADIUS).collect();
    let v: Vec<f64> = to.iter().map(|t| t / BLOCK_RADIUS).collect();
    let cos = dot(&u, &v).clamp(-1.0, 1.0);
    let mut w: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - cos * b).collect();
    let mut wn = norm(&w);
    if wn < 1e-12 {
        // Antipodal: any direction orthogonal to u will do.
        let axis = (0..u.len())
            .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
            .unwrap_or(0);
        w = u.iter().map(|ui| -ui * u[axis]).collect();
        w[axis] += 1.0;
        wn = norm(&w);
    }
    u.iter()
        .zip(&w)
        .map(|(a, b)| BLOCK_RADIUS * (theta.cos() * a + theta.sin() * b / wn))
        .collect()
}

fn loss_at(state: &NetworkState, x: &DomainPoint, y: f64, loss: LossKind) -> f64 {
    loss.value(state.real_output(x.coords()), y)
}

/// Uniform point of the `rho`-ball around `x`, projected onto the cap.
fn random_start<R: Rng>(rng: &mut R, x: &DomainPoint, rho: f64) -> DomainPoint {
    let d = x.dim();
    let dir = rng::unit_direction(rng, d);
    let radius = rho * rng.gen::<f64>().powf(1.0 / d as f64);
    let z: Vec<f64> = x.coords().iter().zip(dir).map(|(c, u)| c + radius * u).collect();
    project_to_cap(&z, x, rho)
}

/// The cap boundary point opposite the loss gradient at `x`. When the loss is
/// V-shaped in a locally linear `f`, its maximum sits at one of `x ± rho g/|g|`
/// and plain ascent from `x` only finds the `+` side.
fn opposite_start(
    state: &NetworkState,
    x: &DomainPoint,
    y: f64,
    loss: LossKind,
    rho: f64,
) -> Result<Option<DomainPoint>> {
    let g = input_gradient(state, x.coords(), y, loss)?;
    Ok(tangent_direction(x, &g).map(|t| {
        let z: Vec<f64> = x.coords().iter().zip(&t).map(|(c, ti)| c - rho * ti).collect();
        project_to_cap(&z, x, rho)
    }))
}

/// Unit component of `g` tangent to the domain at `x`: zero in the last
/// coordinate and orthogonal to the block. Components outside the tangent space
/// are discarded by the projection anyway, so normalising the full gradient
/// would shrink the effective step along the sphere.
fn tangent_direction(x: &DomainPoint, g: &[f64]) -> Option<Vec<f64>> {
    let block = x.block();
    let d = x.dim();
    let radial = dot(&g[..d - 1], block) / (BLOCK_RADIUS * BLOCK_RADIUS);
    let mut t: Vec<f64> = g[..d - 1].iter().zip(block).map(|(gi, b)| gi - radial * b).collect();
    t.push(0.0);
    let tn = norm(&t);
    (tn > 0.0 && tn.is_finite()).then(|| t.into_iter().map(|v| v / tn).collect())
}

/// Multi-restart projected gradient ascent; returns the highest-loss iterate seen,
/// the unperturbed `x` included.
///
/// Restart 0 starts at `x`, restart 1 on the far side of the cap (see
/// [`opposite_start`]), later restarts at random points of the cap. Each step
/// moves `step_size` along the normalised tangent part of the input gradient.
pub fn attack_worst_case(
    state: &NetworkState,
    x: &DomainPoint,
    y: f64,
    loss: LossKind,
    cfg: &AttackConfig,
    stream: u64,
) -> Result<DomainPoint> {
    cfg.validate()?;
    if x.dim() != state.d() {
        return Err(Error::NotInDomain(format!(
            "attack input has dimension {}, network expects {}",
            x.dim(),
            state.d()
        )));
    }
    let mut best = x.clone();
    let mut best_loss = loss_at(state, x, y, loss);
    for restart in 0..cfg.restarts {
        let mut cur = if restart == 0 {
            x.clone()
        } else {
            let start = match (restart, opposite_start(state, x, y, loss, cfg.rho)?) {
                (1, Some(p)) => p,
                _ => {
                    let mut rng = rng::stream(
                        cfg.seed,
                        Purpose::Adversary,
                        rng::compose_index(&[stream, restart as u64]),
                    );
                    random_start(&mut rng, x, cfg.rho)
                }
            };
            let l = loss_at(state, &start, y, loss);
            if l > best_loss {
                best_loss = l;
                best = start.clone();
            }
            start
        };
        for _ in 0..cfg.steps {
            let g = input_gradient(state, cur.coords(), y, loss)?;
            let Some(dir) = tangent_direction(&cur, &g) else {
                break;
            };
            let z: Vec<f64> = cur
                .coords()
                .iter()
                .zip(&dir)
                .map(|(c, t)| c + cfg.step_size * t)
                .collect();
            cur = project_to_cap(&z, x, cfg.rho);
            let l = loss_at(state, &cur, y, loss);
            if l > best_loss {
                best_loss = l;
                best = cur.clone();
            }
        }
    }
    Ok(best)
}

pub fn attack_random(x: &DomainPoint, cfg: &AttackConfig, stream: u64) -> Result<DomainPoint> {
    cfg.validate()?;
    let mut rng = rng::stream(cfg.seed, Purpose::Adversary, rng::compose_index(&[stream, u64::MAX]));
    Ok(random_start(&mut rng, x, cfg.rho))
}

/// `count` independent random points of the cap `B_2(x, rho) ∩ X`.
pub fn sample_cap(x: &DomainPoint, rho: f64, count: usize, seed: u64, stream: u64) -> Vec<DomainPoint> {
    let mut rng = rng::stream(seed, Purpose::Perturbation, stream);
    (0..count).map(|_| random_start(&mut rng, x, rho)).collect()
}

pub fn attack_identity(x: &DomainPoint) -> DomainPoint {
    x.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Adversary {
    Identity,
    Random(AttackConfig),
    Worst(AttackConfig),
}

impl Adversary {
    pub fn name(&self) -> &'static str {
        match self {
            Adversary::Identity => "identity",
            Adversary::Random(_) => "random",
            Adversary::Worst(_) => "worst",
        }
    }

    pub fn perturb(
        &self,
        state: &NetworkState,
        x: &DomainPoint,
        y: f64,
        loss: LossKind,
        stream: u64,
    ) -> Result<DomainPoint> {
        match self {
            Adversary::Identity => Ok(attack_identity(x)),
            Adversary::Random(cfg) => attack_random(x, cfg, stream),
            Adversary::Worst(cfg) => attack_worst_case(state, x, y, loss, cfg, stream),
        }
    }

    /// Attacks every example of `ds` against the current network. `round`
    /// separates the random streams of successive calls.
    pub fn perturb_dataset(
        &self,
        state: &NetworkState,
        ds: &Dataset,
        loss: LossKind,
        round: u64,
    ) -> Result<Vec<DomainPoint>> {
        ds.points()
            .par_iter()
            .zip(ds.labels().par_iter())
            .enumerate()
            .map(|(i, (x, &y))| self.perturb(state, x, y, loss, rng::compose_index(&[round, i as u64])))
            .collect()
    }
}
