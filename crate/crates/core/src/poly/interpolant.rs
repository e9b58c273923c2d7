//! `f*(x) = sum_i y_i q(<x_i, x>)`: a polynomial scorer that fits every training
//! point and every `rho`-perturbation of it to within `eps / 3`.

use serde::Serialize;

use super::step::{step_poly, StepSpec};
use super::Polynomial;
use crate::data::{separability, Dataset, DomainPoint};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug)]
pub struct RobustInterpolant {
    centers: Vec<DomainPoint>,
    labels: Vec<f64>,
    q: Polynomial,
    spec: StepSpec,
    eps: f64,
}

/// Degree and coefficient-size metadata of the interpolant.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InterpolantInfo {
    pub n: usize,
    pub eps: f64,
    pub eps1: f64,
    pub delta: f64,
    pub rho: f64,
    pub gamma: f64,
    pub eta_gap: f64,
    pub alpha_shift: f64,
    pub sign_terms: usize,
    pub degree: usize,
    /// `(24 / gamma) ln(48 n / eps)`
    pub degree_reference: f64,
    /// `log2(2^(6 D) / gamma)` with `D` the reference degree; the hidden constant is not included.
    pub log2_coefficient_reference: f64,
}

impl RobustInterpolant {
    pub fn eval(&self, x: &DomainPoint) -> f64 {
        self.centers
            .iter()
            .zip(&self.labels)
            .map(|(c, y)| y * self.q.eval(c.dot(x)))
            .sum()
    }

    pub fn step(&self) -> &Polynomial {
        &self.q
    }

    pub fn spec(&self) -> &StepSpec {
        &self.spec
    }

    /// `eps / 3`, the uniform fitting tolerance on perturbed training points.
    pub fn tolerance(&self) -> f64 {
        self.eps / 3.0
    }

    pub fn info(&self) -> InterpolantInfo {
        let n = self.centers.len();
        let gamma = self.spec.delta() * (self.spec.delta() - 2.0 * self.spec.rho());
        let degree_reference = 24.0 / gamma * (48.0 * n as f64 / self.eps).ln();
        InterpolantInfo {
            n,
            eps: self.eps,
            eps1: self.spec.eps1(),
            delta: self.spec.delta(),
            rho: self.spec.rho(),
            gamma,
            eta_gap: self.spec.eta_gap(),
            alpha_shift: self.spec.alpha_shift(),
            sign_terms: self.q.sign_terms().unwrap_or(0),
            degree: self.q.degree(),
            degree_reference,
            log2_coefficient_reference: 6.0 * degree_reference - gamma.log2(),
        }
    }
}

/// Builds `f*` for separation `delta`, checking it against the data when `n >= 2`.
pub fn robust_interpolant(ds: &Dataset, rho: f64, delta: f64, eps: f64) -> Result<RobustInterpolant> {
    if ds.is_empty() {
        return Err(Error::Empty("robust interpolant needs at least one point"));
    }
    if !(eps > 0.0 && eps < 3.0) {
        return Err(invalid(format!("eps must lie in (0, 3), got {eps}")));
    }
    if !(delta - 2.0 * rho > 0.0) {
        return Err(Error::SeparabilityViolation { delta, rho });
    }
    if ds.n() >= 2 {
        let measured = separability(ds, rho)?;
        if measured.delta < delta {
            return Err(Error::SeparabilityViolation {
                delta: measured.delta,
                rho,
            });
        }
    }
    let spec = StepSpec::new(rho, delta, eps / (3.0 * ds.n() as f64))?;
    let q = step_poly(&spec)?;
    Ok(RobustInterpolant {
        centers: ds.points().to_vec(),
        labels: ds.labels().to_vec(),
        q,
        spec,
        eps,
    })
}

/// As [`robust_interpolant`] with `delta` measured from the data.
pub fn robust_interpolant_measured(ds: &Dataset, rho: f64, eps: f64) -> Result<RobustInterpolant> {
    let report = separability(ds, rho)?;
    if !report.separable {
        return Err(Error::SeparabilityViolation {
            delta: report.delta,
            rho,
        });
    }
    robust_interpolant(ds, rho, report.delta.min(2.0), eps)
}
