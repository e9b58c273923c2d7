//! Sign and step approximants, Chebyshev compression, complexity measures and
//! the robust interpolant built from them.
//!
//! High-degree polynomials here have monomial coefficients around `2^(4D)`,
//! which cancel catastrophically in floating point. Each [`Polynomial`]
//! therefore keeps the structured form it was built from and always evaluates
//! through it. Monomial coefficients are produced on demand with exact dyadic
//! arithmetic ([`exact::DyadicPoly`]).

pub mod chebyshev;
pub mod complexity;
pub mod exact;
pub mod interpolant;
pub mod sign;
pub mod step;

use serde::Serialize;

use self::chebyshev::{chebyshev_to_monomial, clenshaw, horner};
use self::exact::DyadicPoly;

pub use self::chebyshev::chebyshev_t;
pub use self::complexity::{complexity_measures, ComplexityReport};
pub use self::interpolant::{robust_interpolant, robust_interpolant_measured, RobustInterpolant};
pub use self::sign::{compressed_power, compressed_sign_poly, frostig_sign_poly, SignTerms};
pub use self::step::{step_poly, StepSpec};

#[derive(Clone, Debug)]
enum Form {
    Monomial,
    Chebyshev,
    /// `z * sum_i weights[i] (1 - z^2)^i`
    SignProduct { k: usize, weights: Vec<f64> },
    /// `z * sum_l square_cheb[l] T_l(1 - z^2)`
    CompressedSign {
        k: usize,
        d_cap: f64,
        square_cheb: Vec<f64>,
    },
    /// `(sign((z - shift) / 2) + 1) / 2`
    Step { sign: Box<Polynomial>, shift: f64 },
}

/// A univariate polynomial with its evaluation form and coefficient metadata.
#[derive(Clone, Debug)]
pub struct Polynomial {
    form: Form,
    degree: usize,
    monomial: Option<Monomial>,
    chebyshev_coeffs: Option<Vec<f64>>,
}

/// Monomial coefficients: the exact values and their f64 roundings.
#[derive(Clone, Debug)]
struct Monomial {
    exact: DyadicPoly,
    rounded: Vec<f64>,
}

impl Monomial {
    fn from_exact(exact: DyadicPoly) -> Self {
        let rounded = exact.to_f64_vec();
        Self { exact, rounded }
    }
}

fn trimmed(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && v.last() == Some(&0.0) {
        v.pop();
    }
    if v.is_empty() {
        v.push(0.0);
    }
    v
}

impl Polynomial {
    pub fn from_monomial(coeffs: Vec<f64>) -> Self {
        let exact = DyadicPoly::from_f64_coeffs(&trimmed(coeffs));
        Self {
            form: Form::Monomial,
            degree: exact.degree(),
            monomial: Some(Monomial::from_exact(exact)),
            chebyshev_coeffs: None,
        }
    }

    pub fn from_chebyshev(coeffs: Vec<f64>) -> Self {
        let coeffs = trimmed(coeffs);
        Self {
            form: Form::Chebyshev,
            degree: coeffs.len() - 1,
            monomial: None,
            chebyshev_coeffs: Some(coeffs),
        }
    }

    pub(crate) fn from_both(monomial: DyadicPoly, cheb: Vec<f64>) -> Self {
        let cheb = trimmed(cheb);
        debug_assert_eq!(monomial.degree(), cheb.len() - 1);
        Self {
            form: Form::Chebyshev,
            degree: cheb.len() - 1,
            monomial: Some(Monomial::from_exact(monomial)),
            chebyshev_coeffs: Some(cheb),
        }
    }

    pub(crate) fn sign_product(k: usize, weights: Vec<f64>) -> Self {
        Self {
            form: Form::SignProduct { k, weights },
            degree: 2 * k + 1,
            monomial: None,
            chebyshev_coeffs: None,
        }
    }

    pub(crate) fn compressed_sign(k: usize, d_cap: f64, square_cheb: Vec<f64>) -> Self {
        let square_cheb = trimmed(square_cheb);
        let degree = if square_cheb.iter().all(|&c| c == 0.0) {
            0
        } else {
            2 * (square_cheb.len() - 1) + 1
        };
        Self {
            form: Form::CompressedSign {
                k,
                d_cap,
                square_cheb,
            },
            degree,
            monomial: None,
            chebyshev_coeffs: None,
        }
    }

    pub(crate) fn step(sign: Polynomial, shift: f64) -> Self {
        let degree = sign.degree;
        Self {
            form: Form::Step {
                sign: Box::new(sign),
                shift,
            },
            degree,
            monomial: None,
            chebyshev_coeffs: None,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Monomial coefficients rounded to f64, when expanded.
    pub fn monomial_coeffs(&self) -> Option<&[f64]> {
        self.monomial.as_ref().map(|m| m.rounded.as_slice())
    }

    pub fn chebyshev_coeffs(&self) -> Option<&[f64]> {
        self.chebyshev_coeffs.as_deref()
    }

    /// Name of the representation used for evaluation.
    pub fn basis(&self) -> &'static str {
        match self.form {
            Form::Monomial => "monomial",
            Form::Chebyshev => "chebyshev",
            Form::SignProduct { .. } => "sign_product",
            Form::CompressedSign { .. } => "chebyshev_in_one_minus_z_squared",
            Form::Step { .. } => "shifted_sign",
        }
    }

    /// Coefficients of the structured form, in the basis named by [`basis`](Self::basis).
    pub fn structured_coeffs(&self) -> Vec<f64> {
        match &self.form {
            Form::Monomial => self.monomial_coeffs().unwrap_or(&[]).to_vec(),
            Form::Chebyshev => self.chebyshev_coeffs.clone().unwrap_or_default(),
            Form::SignProduct { weights, .. } => weights.clone(),
            Form::CompressedSign { square_cheb, .. } => square_cheb.clone(),
            Form::Step { sign, .. } => sign.structured_coeffs(),
        }
    }

    /// Number of terms `k` of the underlying sign series, when there is one.
    pub fn sign_terms(&self) -> Option<usize> {
        match &self.form {
            Form::SignProduct { k, .. } | Form::CompressedSign { k, .. } => Some(*k),
            Form::Step { sign, .. } => sign.sign_terms(),
            _ => None,
        }
    }

    /// Chebyshev degree in the compressed variable `w = 1 - z^2`.
    pub fn compression_degree(&self) -> Option<usize> {
        match &self.form {
            Form::CompressedSign { square_cheb, .. } => Some(square_cheb.len() - 1),
            Form::Step { sign, .. } => sign.compression_degree(),
            _ => None,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match &self.form {
            Form::Monomial => horner(self.monomial_coeffs().unwrap_or(&[]), z),
            Form::Chebyshev => clenshaw(self.chebyshev_coeffs.as_deref().unwrap_or(&[]), z),
            Form::SignProduct { weights, .. } => z * horner(weights, 1.0 - z * z),
            Form::CompressedSign { square_cheb, .. } => z * clenshaw(square_cheb, 1.0 - z * z),
            Form::Step { sign, shift } => 0.5 * (sign.eval(0.5 * (z - shift)) + 1.0),
        }
    }

    /// Horner evaluation of the monomial coefficients, carried out exactly and
    /// rounded once at the end.
    pub fn eval_horner(&self, z: f64) -> Option<f64> {
        self.monomial.as_ref().map(|m| m.exact.eval_exact(z))
    }

    pub fn eval_clenshaw(&self, z: f64) -> Option<f64> {
        self.chebyshev_coeffs.as_deref().map(|c| clenshaw(c, z))
    }

    /// Exact monomial expansion.
    ///
    /// Sign-series forms are expanded from their exact rational definition; the
    /// plain monomial and Chebyshev forms are expanded from the stored f64
    /// coefficients taken as exact values.
    pub fn exact_monomial(&self) -> DyadicPoly {
        match &self.form {
            Form::Monomial => self.monomial.as_ref().unwrap().exact.clone(),
            Form::Chebyshev => chebyshev_to_monomial(&DyadicPoly::from_f64_coeffs(
                self.chebyshev_coeffs.as_deref().unwrap(),
            )),
            Form::SignProduct { k, .. } => sign::sign_product_exact(*k),
            Form::CompressedSign { k, d_cap, .. } => sign::compressed_sign_exact(*k, *d_cap),
            Form::Step { sign, shift } => {
                let inner = sign.exact_monomial().compose_half_shift(*shift);
                let one = DyadicPoly::from_f64_coeffs(&[1.0]);
                inner.add(&one).scale_pow2(-1).normalized()
            }
        }
    }

    /// Attaches the exact monomial expansion as metadata.
    pub fn with_monomial_metadata(mut self) -> Self {
        if self.monomial.is_none() {
            self.monomial = Some(Monomial::from_exact(self.exact_monomial()));
        }
        self
    }
}

/// `n` evenly spaced points covering `[a, b]` including both endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { b } else { a + step * i as f64 })
}

/// Outcome of checking a polynomial against a target on a uniform grid.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Certification {
    pub interval: [f64; 2],
    pub grid_points: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Certification {
    pub fn on_grid(
        interval: [f64; 2],
        grid_points: usize,
        tolerance: f64,
        error: impl Fn(f64) -> f64,
    ) -> Self {
        let max_error = linspace(interval[0], interval[1], grid_points)
            .map(error)
            .fold(0.0_f64, |m, e| if e.is_nan() { f64::NAN } else { m.max(e) });
        Self {
            interval,
            grid_points,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
        }
    }

    pub fn into_result(self) -> crate::Result<Self> {
        if self.pass {
            Ok(self)
        } else {
            Err(crate::Error::CertificationFailed {
                interval: format!("[{}, {}]", self.interval[0], self.interval[1]),
                max_error: self.max_error,
                tolerance: self.tolerance,
            })
        }
    }
}

pub const DEFAULT_CERT_GRID: usize = 10_000;
