//! The input domain `X = { x : ||x||_2 = 1, x_d = 1/2 }`, datasets on it, and
//! separability measurement.

pub mod csvio;
pub mod separability;
pub mod synth;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{self, Purpose};

pub use self::separability::{delta_histogram, separability, HistogramBin, SeparabilityReport};
pub use self::synth::{pad_and_normalize, synth_separated, SynthConfig};

/// Fixed value of the last coordinate.
pub const LAST_COORD: f64 = 0.5;
/// Norm of the first `d - 1` coordinates, `sqrt(3) / 2`.
pub const BLOCK_RADIUS: f64 = 0.866_025_403_784_438_6;
/// Tolerance on `||x||_2 = 1`.
pub const NORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DomainPoint(Vec<f64>);

impl DomainPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::NotInDomain(format!("dimension {} < 2", coords.len())));
        }
        let last = *coords.last().unwrap();
        if last != LAST_COORD {
            return Err(Error::NotInDomain(format!("last coordinate is {last}, expected 0.5")));
        }
        let norm = norm(&coords);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotInDomain(format!("norm is {norm}")));
        }
        Ok(Self(coords))
    }

    /// Scales a nonzero block to radius `sqrt(3)/2` and appends `1/2`.
    pub fn from_block(block: &[f64]) -> Result<Self> {
        let n = norm(block);
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid("cannot place a zero or non-finite block on the sphere"));
        }
        let mut coords: Vec<f64> = block.iter().map(|v| v * BLOCK_RADIUS / n).collect();
        coords.push(LAST_COORD);
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The first `d - 1` coordinates.
    pub fn block(&self) -> &[f64] {
        &self.0[..self.0.len() - 1]
    }

    pub fn dot(&self, other: &DomainPoint) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn distance(&self, other: &DomainPoint) -> f64 {
        distance(&self.0, &other.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for DomainPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DomainPoint> for Vec<f64> {
    fn from(p: DomainPoint) -> Self {
        p.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    points: Vec<DomainPoint>,
    labels: Vec<f64>,
}

impl Dataset {
    pub fn new(points: Vec<DomainPoint>, labels: Vec<f64>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        if let Some(first) = points.first() {
            let d = first.dim();
            if let Some(bad) = points.iter().find(|p| p.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: bad.dim(),
                });
            }
        }
        if let Some(y) = labels.iter().find(|y| !(y.abs() <= 1.0)) {
            return Err(invalid(format!("label {y} has magnitude above 1")));
        }
        Ok(Self { points, labels })
    }

    pub fn points(&self) -> &[DomainPoint] {
        &self.points
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn d(&self) -> usize {
        self.points.first().map_or(0, DomainPoint::dim)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `count` points uniform on `X` (uniform direction of the block).
pub fn sample_domain(d: usize, count: usize, seed: u64, index: u64) -> Vec<DomainPoint> {
    let mut rng = rng::stream(seed, Purpose::DomainSample, index);
    (0..count).map(|_| random_domain_point(&mut rng, d)).collect()
}

pub fn random_domain_point<R: Rng>(rng: &mut R, d: usize) -> DomainPoint {
    let dir = rng::unit_direction(rng, d - 1);
    let mut coords: Vec<f64> = dir.into_iter().map(|v| v * BLOCK_RADIUS).collect();
    coords.push(LAST_COORD);
    DomainPoint(coords)
}
