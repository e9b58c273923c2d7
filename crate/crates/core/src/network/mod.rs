//! Two-layer ReLU network `f(x) = sum_r a_r relu(<W_r, x> + b_r)` with only `W`
//! trained, and its pseudo-network
//! `g(x) = sum_r a_r <W_r - W0_r, x> 1{<W0_r, x> + b_r >= 0}`.

pub mod anticonc;
pub mod coupling;
mod grad;
pub mod snapshot;

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::DomainPoint;
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

pub use self::anticonc::{anti_concentration_check, AntiConcRow};
pub use self::coupling::{activation_flip_count, coupling_gap, coupling_scan, gradient_coupling_norm, perturb_columns};
pub use self::grad::{grad_loss_pseudo, grad_loss_real};
pub use self::snapshot::NetworkSnapshot;

/// A `d x m` matrix whose column `r` holds the weights of hidden neuron `r`.
///
/// Stored row-major so a pass over all neurons for one input coordinate is contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    d: usize,
    m: usize,
    data: Vec<f64>,
}

impl Weights {
    pub fn zeros(d: usize, m: usize) -> Self {
        Self {
            d,
            m,
            data: vec![0.0; d * m],
        }
    }

    /// Builds from row-major data (`d` rows of `m` entries).
    pub fn from_rows(d: usize, m: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != d * m {
            return Err(Error::DimensionMismatch {
                expected: d * m,
                got: data.len(),
            });
        }
        Ok(Self { d, m, data })
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let m = columns.len();
        let d = columns.first().map_or(0, Vec::len);
        let mut w = Self::zeros(d, m);
        for (r, col) in columns.iter().enumerate() {
            if col.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: col.len(),
                });
            }
            for (k, v) in col.iter().enumerate() {
                w.data[k * m + r] = *v;
            }
        }
        Ok(w)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.m..(k + 1) * self.m]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.m..(k + 1) * self.m]
    }

    pub fn get(&self, k: usize, r: usize) -> f64 {
        self.data[k * self.m + r]
    }

    pub fn set(&mut self, k: usize, r: usize, v: f64) {
        self.data[k * self.m + r] = v;
    }

    pub fn column(&self, r: usize) -> Vec<f64> {
        (0..self.d).map(|k| self.get(k, r)).collect()
    }

    fn check_shape(&self, other: &Weights) -> Result<()> {
        if self.d != other.d || self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.d * self.m,
                got: other.d * other.m,
            });
        }
        Ok(())
    }

    pub fn sub(&self, other: &Weights) -> Result<Weights> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Weights { data, ..*self })
    }

    pub fn add(&self, other: &Weights) -> Result<Weights> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Weights { data, ..*self })
    }

    /// `self + scale * other`
    pub fn add_scaled(&self, scale: f64, other: &Weights) -> Result<Weights> {
        self.check_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + scale * b)
            .collect();
        Ok(Weights { data, ..*self })
    }

    pub fn scaled(&self, c: f64) -> Weights {
        Weights {
            data: self.data.iter().map(|v| c * v).collect(),
            ..*self
        }
    }

    pub fn column_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.m];
        for k in 0..self.d {
            for (s, v) in sq.iter_mut().zip(self.row(k)) {
                *s += v * v;
            }
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    pub fn norms(&self) -> WeightNorms {
        let cols = self.column_norms();
        WeightNorms {
            two_inf: cols.iter().copied().fold(0.0, f64::max),
            two_one: cols.iter().sum(),
            frob: cols.iter().map(|c| c * c).sum::<f64>().sqrt(),
        }
    }
}

/// Column-wise norms of a weight matrix (usually `W - W0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightNorms {
    /// Largest column norm.
    pub two_inf: f64,
    /// Sum of column norms.
    pub two_one: f64,
    pub frob: f64,
}

/// Frozen initialisation: `W0`, `b0` with iid `N(0, 1/m)` entries and output
/// weights `a0_r = ±m^(-1/3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitSnapshot {
    m: usize,
    d: usize,
    seed: u64,
    w0: Weights,
    b0: Vec<f64>,
    a0: Vec<f64>,
}

impl InitSnapshot {
    pub fn generate(m: usize, d: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(crate::error::invalid("width m must be at least 1"));
        }
        if d < 2 {
            return Err(crate::error::invalid("dimension d must be at least 2"));
        }
        // Neuron r draws from streams keyed by r, so a wider network extends a
        // narrower one with the same seed (up to the 1/sqrt(m) and m^(-1/3) scales).
        let std = 1.0 / (m as f64).sqrt();
        let scale = output_scale(m);
        let mut w0 = Weights::zeros(d, m);
        let mut b0 = Vec::with_capacity(m);
        let mut a0 = Vec::with_capacity(m);
        for r in 0..m {
            let mut wr = rng::stream(seed, Purpose::InitWeights, r as u64);
            for (k, v) in rng::normal_vec(&mut wr, d).into_iter().enumerate() {
                w0.set(k, r, v * std);
            }
            let mut br = rng::stream(seed, Purpose::InitBias, r as u64);
            b0.push(rng::normal_vec(&mut br, 1)[0] * std);
            let mut ar = rng::stream(seed, Purpose::InitSigns, r as u64);
            a0.push(if ar.gen::<bool>() { scale } else { -scale });
        }
        Ok(Self {
            m,
            d,
            seed,
            w0,
            b0,
            a0,
        })
    }

    /// Custom initialisation. Output weights must be `±m^(-1/3)`; only their
    /// signs are kept. `seed` is recorded but not used, so snapshots of states
    /// built on a custom init cannot be restored.
    pub fn from_parts(w0: Weights, b0: Vec<f64>, a0: Vec<f64>, seed: u64) -> Result<Self> {
        let (d, m) = (w0.d(), w0.m());
        if d < 2 || m == 0 {
            return Err(crate::error::invalid("need d >= 2 and m >= 1"));
        }
        for len in [b0.len(), a0.len()] {
            if len != m {
                return Err(crate::Error::DimensionMismatch { expected: m, got: len });
            }
        }
        let scale = output_scale(m);
        if a0.iter().any(|a| (a.abs() - scale).abs() > 1e-12 * scale) {
            return Err(crate::error::invalid("output weights must be +-m^(-1/3)"));
        }
        if w0.as_slice().iter().chain(&b0).any(|v| !v.is_finite()) {
            return Err(crate::error::invalid("initial weights must be finite"));
        }
        let a0 = a0.into_iter().map(|a| if a > 0.0 { scale } else { -scale }).collect();
        Ok(Self {
            m,
            d,
            seed,
            w0,
            b0,
            a0,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn w0(&self) -> &Weights {
        &self.w0
    }
    pub fn b0(&self) -> &[f64] {
        &self.b0
    }
    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    /// Pre-activations `<W0_r, x> + b0_r` for every neuron.
    pub fn initial_preactivations(&self, x: &[f64]) -> Vec<f64> {
        preactivations(&self.w0, &self.b0, x)
    }
}

/// `m^(-1/3)`
pub fn output_scale(m: usize) -> f64 {
    (m as f64).powf(-1.0 / 3.0)
}

/// `b + W^T x`, one entry per neuron.
pub(crate) fn preactivations(w: &Weights, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = b.to_vec();
    for (k, &xk) in x.iter().enumerate() {
        if xk != 0.0 {
            for (o, wv) in out.iter_mut().zip(w.row(k)) {
                *o += xk * wv;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    init: Arc<InitSnapshot>,
    w: Weights,
}

pub fn init_network(m: usize, d: usize, seed: u64) -> Result<NetworkState> {
    let init = Arc::new(InitSnapshot::generate(m, d, seed)?);
    let w = init.w0.clone();
    Ok(NetworkState { init, w })
}

impl NetworkState {
    pub fn from_parts(init: Arc<InitSnapshot>, w: Weights) -> Result<Self> {
        if w.d != init.d || w.m != init.m {
            return Err(Error::DimensionMismatch {
                expected: init.d * init.m,
                got: w.d * w.m,
            });
        }
        Ok(Self { init, w })
    }

    /// Same initialisation, new hidden weights.
    pub fn with_weights(&self, w: Weights) -> Result<Self> {
        Self::from_parts(Arc::clone(&self.init), w)
    }

    pub fn init(&self) -> &InitSnapshot {
        &self.init
    }

    pub fn init_arc(&self) -> &Arc<InitSnapshot> {
        &self.init
    }

    pub fn weights(&self) -> &Weights {
        &self.w
    }

    pub fn m(&self) -> usize {
        self.init.m
    }

    pub fn d(&self) -> usize {
        self.init.d
    }

    /// `W - W0`
    pub fn delta(&self) -> Weights {
        self.w.sub(&self.init.w0).expect("shapes fixed at construction")
    }

    pub fn drift(&self) -> WeightNorms {
        self.delta().norms()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn preactivations(&self, x: &[f64]) -> Vec<f64> {
        preactivations(&self.w, &self.init.b0, x)
    }

    pub fn forward_real(&self, x: &DomainPoint) -> Result<f64> {
        self.check_dim(x.coords())?;
        Ok(self.real_output(x.coords()))
    }

    pub fn forward_pseudo(&self, x: &DomainPoint) -> Result<f64> {
        self.check_dim(x.coords())?;
        Ok(self.pseudo_output(x.coords()))
    }

    /// Both outputs from one pass.
    pub fn forward_pair(&self, x: &DomainPoint) -> Result<(f64, f64)> {
        self.check_dim(x.coords())?;
        Ok(self.pair_output(x.coords()))
    }

    /// `f` on raw coordinates (no domain check); used by attacks and finite differences.
    pub fn real_output(&self, x: &[f64]) -> f64 {
        self.preactivations(x)
            .iter()
            .zip(&self.init.a0)
            .map(|(z, a)| a * z.max(0.0))
            .sum()
    }

    pub fn pseudo_output(&self, x: &[f64]) -> f64 {
        self.pair_output(x).1
    }

    pub(crate) fn pair_output(&self, x: &[f64]) -> (f64, f64) {
        let pre0 = self.init.initial_preactivations(x);
        let pre = self.preactivations(x);
        self.pair_from_preactivations(&pre, &pre0)
    }

    /// Biases are never trained, so `<W_r - W0_r, x> = pre_r - pre0_r`.
    pub(crate) fn pair_from_preactivations(&self, pre: &[f64], pre0: &[f64]) -> (f64, f64) {
        let mut f = 0.0;
        let mut g = 0.0;
        for r in 0..self.m() {
            let a = self.init.a0[r];
            f += a * pre[r].max(0.0);
            if pre0[r] >= 0.0 {
                g += a * (pre[r] - pre0[r]);
            }
        }
        (f, g)
    }

    pub fn forward_real_batch(&self, points: &[DomainPoint]) -> Result<Vec<f64>> {
        points.par_iter().map(|p| self.forward_real(p)).collect()
    }
}

pub(crate) fn relu_active(z: f64) -> bool {
    z >= 0.0
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{sample_domain, BLOCK_RADIUS};

    #[test]
    fn init_is_deterministic() {
        let a = InitSnapshot::generate(64, 5, 9).unwrap();
        let b = InitSnapshot::generate(64, 5, 9).unwrap();
        let c = InitSnapshot::generate(64, 5, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.w0, c.w0);
    }

    #[test]
    fn init_moments() {
        let (m, d) = (4096, 16);
        let init = InitSnapshot::generate(m, d, 1).unwrap();
        let entries = init.w0.as_slice();
        let count = entries.len() as f64;
        let mean = entries.iter().sum::<f64>() / count;
        let var = entries.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
        let target = 1.0 / m as f64;
        assert!(mean.abs() <= 3.0 * (target / count).sqrt(), "mean {mean}");
        assert!((var - target).abs() <= 0.1 * target, "var {var}");
        let scale = output_scale(m);
        assert!(init.a0.iter().all(|a| a.abs() == scale));
        let pos = init.a0.iter().filter(|a| **a > 0.0).count() as f64 / m as f64;
        assert!((pos - 0.5).abs() <= 4.0 / (m as f64).sqrt());
    }

    #[test]
    fn hand_computed_single_neuron() {
        let init = InitSnapshot {
            m: 1,
            d: 2,
            seed: 0,
            w0: Weights::from_columns(&[vec![1.0, 0.0]]).unwrap(),
            b0: vec![0.1],
            a0: vec![1.0],
        };
        let state = NetworkState::from_parts(Arc::new(init), Weights::from_columns(&[vec![1.0, 0.0]]).unwrap()).unwrap();
        let x = DomainPoint::new(vec![BLOCK_RADIUS, 0.5]).unwrap();
        assert!((state.forward_real(&x).unwrap() - (BLOCK_RADIUS + 0.1)).abs() < 1e-15);
        assert_eq!(state.forward_pseudo(&x).unwrap(), 0.0);

        // Move the weight: g picks up <dW, x> since the neuron is active at init.
        let moved = state
            .with_weights(Weights::from_columns(&[vec![1.0, 2.0]]).unwrap())
            .unwrap();
        assert!((moved.forward_pseudo(&x).unwrap() - 1.0).abs() < 1e-15);
        assert!((moved.forward_real(&x).unwrap() - (BLOCK_RADIUS + 1.1)).abs() < 1e-15);

        // Dead neuron.
        let dead = state
            .with_weights(Weights::from_columns(&[vec![-1.0, 0.0]]).unwrap())
            .unwrap();
        assert_eq!(dead.forward_real(&x).unwrap(), 0.0);
    }

    #[test]
    fn pseudo_vanishes_at_init() {
        let state = init_network(128, 6, 3).unwrap();
        for x in sample_domain(6, 20, 1, 0) {
            assert_eq!(state.forward_pseudo(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let state = init_network(8, 4, 0).unwrap();
        let x = DomainPoint::new(vec![BLOCK_RADIUS, 0.5]).unwrap();
        assert!(state.forward_real(&x).is_err());
    }

    #[test]
    fn norm_chain() {
        let init = InitSnapshot::generate(50, 7, 4).unwrap();
        let n = init.w0.norms();
        assert!(n.two_inf <= n.frob && n.frob <= n.two_one);
    }
}
