//! Coefficient-weighted complexity measures of a polynomial.
//!
//! Both sums are accumulated in base-2 log space from the exact monomial
//! expansion, so they stay meaningful past the f64 range.

use serde::Serialize;

use super::exact::DyadicPoly;
use super::Polynomial;
use crate::error::{invalid, Result};

pub const DEFAULT_BASE_CONSTANT: f64 = 2.0;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ComplexityReport {
    /// `sum_j c^j (1 + (sqrt(ln(1/eps1) / j))^j) |a_j|`, with the `j = 0` term `2 |a_0|`.
    pub c_eps: f64,
    /// `c * sum_j (j + 1)^1.75 |a_j|`
    pub c_plain: f64,
    pub log2_c_eps: f64,
    pub log2_c_plain: f64,
    pub base_constant: f64,
}

fn log2_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|t| t.is_finite()).collect();
    let Some(max) = terms.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + terms.iter().map(|t| (t - max).exp2()).sum::<f64>().log2()
}

/// `log2(1 + e^s)`
fn log2_one_plus_exp(s: f64) -> f64 {
    if s > 40.0 {
        s / std::f64::consts::LN_2
    } else {
        s.exp().ln_1p() / std::f64::consts::LN_2
    }
}

pub fn complexity_measures(p: &Polynomial, eps1: f64, base_constant: f64) -> Result<ComplexityReport> {
    complexity_of_coefficients(&p.exact_monomial(), eps1, base_constant)
}

pub fn complexity_of_coefficients(
    coeffs: &DyadicPoly,
    eps1: f64,
    base_constant: f64,
) -> Result<ComplexityReport> {
    if !(eps1 > 0.0 && eps1 < 1.0) {
        return Err(invalid(format!("eps1 must lie in (0, 1), got {eps1}")));
    }
    if !(base_constant > 1.0) {
        return Err(invalid(format!("base constant must exceed 1, got {base_constant}")));
    }
    let log_c = base_constant.log2();
    let ln_inv_eps = (1.0 / eps1).ln();
    let n = coeffs.degree() + 1;

    let log2_c_eps = log2_sum((0..n).map(|j| {
        let mag = coeffs.log2_abs(j);
        if j == 0 {
            1.0 + mag
        } else {
            let jf = j as f64;
            // (sqrt(L / j))^j = exp((j / 2) ln(L / j))
            let s = 0.5 * jf * (ln_inv_eps / jf).ln();
            jf * log_c + log2_one_plus_exp(s) + mag
        }
    }));
    let log2_c_plain = log_c
        + log2_sum((0..n).map(|j| 1.75 * ((j + 1) as f64).log2() + coeffs.log2_abs(j)));

    Ok(ComplexityReport {
        c_eps: log2_c_eps.exp2(),
        c_plain: log2_c_plain.exp2(),
        log2_c_eps,
        log2_c_plain,
        base_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_polynomial_has_zero_complexity() {
        let r = complexity_measures(&Polynomial::from_monomial(vec![0.0]), 0.1, 2.0).unwrap();
        assert_eq!(r.c_eps, 0.0);
        assert_eq!(r.c_plain, 0.0);
    }

    #[test]
    fn identity_polynomial() {
        let p = Polynomial::from_monomial(vec![0.0, 1.0]);
        let r = complexity_measures(&p, 0.1, 2.0).unwrap();
        assert!((r.c_plain - 2.0 * 2f64.powf(1.75)).abs() < 1e-12);
        // j = 1: c (1 + sqrt(ln 10)) |a_1|
        let expected = 2.0 * (1.0 + 10f64.ln().sqrt());
        assert!((r.c_eps - expected).abs() < 1e-12);
    }

    #[test]
    fn constant_term_uses_limit_convention() {
        let p = Polynomial::from_monomial(vec![-3.0]);
        let r = complexity_measures(&p, 0.5, 4.0).unwrap();
        assert!((r.c_eps - 6.0).abs() < 1e-12);
        assert!((r.c_plain - 12.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = Polynomial::from_monomial(vec![1.0]);
        assert!(complexity_measures(&p, 0.0, 2.0).is_err());
        assert!(complexity_measures(&p, 0.5, 1.0).is_err());
    }

    #[test]
    fn direct_summation_oracle() {
        let coeffs = vec![0.5, -1.25, 0.0, 3.0, 0.125];
        let p = Polynomial::from_monomial(coeffs.clone());
        let (eps1, c): (f64, f64) = (0.05, 2.5);
        let l = (1.0 / eps1).ln();
        let mut c_eps = 2.0 * coeffs[0].abs();
        let mut c_plain = 0.0;
        for (j, a) in coeffs.iter().enumerate() {
            if j > 0 {
                let jf = j as f64;
                c_eps += c.powi(j as i32) * (1.0 + (l / jf).sqrt().powi(j as i32)) * a.abs();
            }
            c_plain += ((j + 1) as f64).powf(1.75) * a.abs();
        }
        c_plain *= c;
        let r = complexity_measures(&p, eps1, c).unwrap();
        assert!((r.c_eps - c_eps).abs() < 1e-10 * c_eps);
        assert!((r.c_plain - c_plain).abs() < 1e-10 * c_plain);
    }
}
