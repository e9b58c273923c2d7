//! Step polynomial: close to 1 for inner products within a `rho`-ball and close to 0
//! for inner products of points at least `delta - rho` apart.

use serde::Serialize;

use super::sign::compressed_sign_poly;
use super::{Certification, Polynomial, DEFAULT_CERT_GRID};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepSpec {
    rho: f64,
    delta: f64,
    eps1: f64,
    eta_gap: f64,
    alpha_shift: f64,
}

impl StepSpec {
    pub fn new(rho: f64, delta: f64, eps1: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(invalid(format!("rho must be positive, got {rho}")));
        }
        if !(delta > 0.0 && delta <= 2.0) {
            return Err(invalid(format!("delta must lie in (0, 2], got {delta}")));
        }
        if !(delta - 2.0 * rho > 0.0) {
            return Err(crate::Error::SeparabilityViolation { delta, rho });
        }
        if !(eps1 > 0.0 && eps1 < 1.0) {
            return Err(invalid(format!("eps1 must lie in (0, 1), got {eps1}")));
        }
        let eta_gap = delta * (delta - 2.0 * rho) / 8.0;
        let alpha_shift = 1.0 - rho * rho / 2.0 - 2.0 * eta_gap;
        if !(alpha_shift > -1.0 && alpha_shift < 1.0) {
            return Err(invalid(format!("derived shift {alpha_shift} leaves (-1, 1)")));
        }
        Ok(Self {
            rho,
            delta,
            eps1,
            eta_gap,
            alpha_shift,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn eps1(&self) -> f64 {
        self.eps1
    }
    /// `delta (delta - 2 rho) / 8`
    pub fn eta_gap(&self) -> f64 {
        self.eta_gap
    }
    /// `1 - rho^2 / 2 - 2 eta`
    pub fn alpha_shift(&self) -> f64 {
        self.alpha_shift
    }

    /// Inner products of points within `rho`: `[1 - rho^2/2, 1]`.
    pub fn near_interval(&self) -> [f64; 2] {
        [1.0 - self.rho * self.rho / 2.0, 1.0]
    }

    /// Inner products of points at least `delta - rho` apart: `[-1, 1 - (delta - rho)^2/2]`.
    pub fn far_interval(&self) -> [f64; 2] {
        let gap = self.delta - self.rho;
        [-1.0, 1.0 - gap * gap / 2.0]
    }
}

/// `q(z) = (p~((z - alpha) / 2) + 1) / 2` with `p~` the certified compressed sign
/// approximant for gap `eta`.
///
/// The half-scaling keeps the sign argument inside `[-1, 1]` for every
/// `z in [-1, 1]` and maps the far interval's right end exactly to `-eta`.
pub fn step_poly(spec: &StepSpec) -> Result<Polynomial> {
    let sign = compressed_sign_poly(spec.eta_gap, spec.eps1)?;
    let q = Polynomial::step(sign, spec.alpha_shift);
    for c in certify_step(&q, spec, DEFAULT_CERT_GRID) {
        c.into_result()?;
    }
    Ok(q)
}

/// Property 1 (`|q - 1| <= eps1` near 1) and property 2 (`|q| <= eps1` far).
pub fn certify_step(q: &Polynomial, spec: &StepSpec, grid: usize) -> [Certification; 2] {
    [
        Certification::on_grid(spec.near_interval(), grid, spec.eps1, |z| (q.eval(z) - 1.0).abs()),
        Certification::on_grid(spec.far_interval(), grid, spec.eps1, |z| q.eval(z).abs()),
    ]
}
