//! Polynomial approximations of `sgn` on `[-1, -eta] ∪ [eta, 1]`.
//!
//! The base approximant is the truncated series
//! `p_k(z) = z * sum_{i<=k} c_i (1 - z^2)^i` with `c_i = prod_{j<=i} (2j-1)/(2j)`.
//! The compressed approximant replaces each power `(1 - z^2)^i` by its
//! Chebyshev compression `p_{i,D}(1 - z^2)`, which caps the degree in
//! `1 - z^2` at `D`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::chebyshev::chebyshev_to_monomial;
use super::exact::DyadicPoly;
use super::{Certification, Polynomial, DEFAULT_CERT_GRID};
use crate::error::{invalid, Result};

/// Series length and compression cap for a sign approximant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignTerms {
    pub k: usize,
    pub d_cap: f64,
}

impl SignTerms {
    pub fn new(eta_gap: f64, eps1: f64) -> Result<Self> {
        check_unit_open("eta_gap", eta_gap)?;
        check_unit_open("eps1", eps1)?;
        let k = ((2.0 / eps1).ln() / (eta_gap * eta_gap)).ceil() as usize;
        let kf = k as f64;
        let d_cap = (2.0 * kf * (4.0 * kf / eps1).ln()).sqrt();
        Ok(Self { k, d_cap })
    }

    /// `ceil((3 / eta) ln(2 / (eta eps1)))`
    pub fn degree_bound(eta_gap: f64, eps1: f64) -> usize {
        ((3.0 / eta_gap) * (2.0 / (eta_gap * eps1)).ln()).ceil() as usize
    }
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0, 1), got {v}")))
    }
}

/// `c_i = prod_{j=1}^{i} (2j - 1) / (2j)` for `i = 0..=k`.
fn series_weights(k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k + 1);
    let mut c = 1.0;
    out.push(c);
    for i in 1..=k {
        c *= (2 * i - 1) as f64 / (2 * i) as f64;
        out.push(c);
    }
    out
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// Indices `j` of the walk endpoint `2j - s` with `|2j - s| <= cap`.
fn window(s: usize, cap: usize) -> std::ops::RangeInclusive<usize> {
    let lo = s.saturating_sub(cap).div_ceil(2);
    let hi = ((s + cap) / 2).min(s);
    lo..=hi
}

/// `p_k` from the truncated series, evaluated in product form.
pub fn frostig_sign_poly(eta_gap: f64, eps1: f64) -> Result<Polynomial> {
    let terms = SignTerms::new(eta_gap, eps1)?;
    Ok(Polynomial::sign_product(terms.k, series_weights(terms.k)))
}

/// Chebyshev coefficients of `p_{s,D}`: the expectation of `T_{D_s}` over a
/// `±1` random walk of `s` steps, restricted to `|D_s| <= d_cap`.
fn compressed_power_coeffs(s: usize, d_cap: f64, ln_fact: &[f64]) -> Vec<f64> {
    let cap = (d_cap.floor() as usize).min(s);
    let mut out = vec![0.0; cap + 1];
    let ln_half_s = s as f64 * std::f64::consts::LN_2;
    for j in window(s, cap) {
        let l = (2 * j).abs_diff(s);
        let ln_w = ln_fact[s] - ln_fact[j] - ln_fact[s - j] - ln_half_s;
        out[l] += ln_w.exp();
    }
    out
}

/// `p_{s,D}` in the Chebyshev basis.
pub fn compressed_power(s: usize, d_cap: f64) -> Result<Polynomial> {
    if s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    if !(d_cap > 0.0) {
        return Err(invalid(format!("d_cap must be positive, got {d_cap}")));
    }
    let ln_fact = ln_factorials(s);
    Ok(Polynomial::from_chebyshev(compressed_power_coeffs(s, d_cap, &ln_fact)))
}

/// Chebyshev coefficients, in `w = 1 - z^2`, of `sum_i c_i p_{i,D}(w)`.
fn compressed_sign_coeffs(terms: SignTerms) -> Vec<f64> {
    let SignTerms { k, d_cap } = terms;
    let cap = (d_cap.floor() as usize).min(k);
    let ln_fact = ln_factorials(k);
    let weights = series_weights(k);
    let mut out = vec![0.0; cap + 1];
    for (i, &c) in weights.iter().enumerate() {
        let ln_half_i = i as f64 * std::f64::consts::LN_2;
        for j in window(i, cap) {
            let l = (2 * j).abs_diff(i);
            let ln_w = ln_fact[i] - ln_fact[j] - ln_fact[i - j] - ln_half_i;
            out[l] += c * ln_w.exp();
        }
    }
    out
}

/// Compressed sign approximant `p~_k`, certified on a 10^4-point grid.
pub fn compressed_sign_poly(eta_gap: f64, eps1: f64) -> Result<Polynomial> {
    let p = compressed_sign_uncertified(eta_gap, eps1)?;
    certify_sign(&p, eta_gap, eps1, DEFAULT_CERT_GRID)
        .into_iter()
        .try_for_each(|c| c.into_result().map(|_| ()))?;
    Ok(p)
}

/// The compressed sign approximant without the grid check.
pub fn compressed_sign_uncertified(eta_gap: f64, eps1: f64) -> Result<Polynomial> {
    let terms = SignTerms::new(eta_gap, eps1)?;
    Ok(Polynomial::compressed_sign(
        terms.k,
        terms.d_cap,
        compressed_sign_coeffs(terms),
    ))
}

/// Deviation from `sgn` on `[-1, -eta]` and `[eta, 1]`.
pub fn certify_sign(p: &Polynomial, eta_gap: f64, eps1: f64, grid: usize) -> [Certification; 2] {
    [
        Certification::on_grid([-1.0, -eta_gap], grid, eps1, |z| (p.eval(z) + 1.0).abs()),
        Certification::on_grid([eta_gap, 1.0], grid, eps1, |z| (p.eval(z) - 1.0).abs()),
    ]
}

/// Exact monomial expansion of `p_k`: the coefficient of `z^(2u+1)` is
/// `(-1)^u sum_{i>=u} C(2i, i) 4^(-i) C(i, u)`.
pub(crate) fn sign_product_exact(k: usize) -> DyadicPoly {
    let mut out = vec![BigInt::zero(); 2 * k + 2];
    let mut central = BigInt::from(1); // C(2i, i)
    let mut row: Vec<BigInt> = vec![BigInt::from(1)]; // C(i, .)
    for i in 0..=k {
        if i > 0 {
            central = central * (2 * i) * (2 * i - 1) / (i * i);
            row = pascal_next(&row);
        }
        let weight = &central << (2 * (k - i)) as u64;
        for (u, binom) in row.iter().enumerate() {
            let term = &weight * binom;
            if u % 2 == 0 {
                out[2 * u + 1] += term;
            } else {
                out[2 * u + 1] -= term;
            }
        }
    }
    DyadicPoly::new(out, 2 * k as u64).normalized()
}

fn pascal_next(row: &[BigInt]) -> Vec<BigInt> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(BigInt::from(1));
    for w in row.windows(2) {
        next.push(&w[0] + &w[1]);
    }
    next.push(BigInt::from(1));
    next
}

/// Exact monomial expansion of the compressed sign approximant.
///
/// The Chebyshev weights in `w` are `C(2i,i) C(i,j) / 2^(3i)` summed over the
/// walk window, so everything is an integer over `2^(3k)`.
pub(crate) fn compressed_sign_exact(k: usize, d_cap: f64) -> DyadicPoly {
    let cap = (d_cap.floor() as usize).min(k);
    let mut beta = vec![BigInt::zero(); cap + 1];
    let mut central = BigInt::from(1);
    let mut row: Vec<BigInt> = vec![BigInt::from(1)];
    for i in 0..=k {
        if i > 0 {
            central = central * (2 * i) * (2 * i - 1) / (i * i);
            row = pascal_next(&row);
        }
        let weight = &central << (3 * (k - i)) as u64;
        for j in window(i, cap) {
            let l = (2 * j).abs_diff(i);
            beta[l] += &weight * &row[j];
        }
    }
    let in_w = chebyshev_to_monomial(&DyadicPoly::new(beta, 3 * k as u64));
    substitute_one_minus_square_times_z(&in_w)
}

/// Given `P(w)`, returns `z * P(1 - z^2)`.
fn substitute_one_minus_square_times_z(p: &DyadicPoly) -> DyadicPoly {
    let n = p.degree();
    let mut out = vec![BigInt::zero(); 2 * n + 2];
    let mut row: Vec<BigInt> = vec![BigInt::from(1)];
    for (j, pj) in p.numerators().iter().enumerate() {
        if j > 0 {
            row = pascal_next(&row);
        }
        if pj.is_zero() {
            continue;
        }
        for (u, binom) in row.iter().enumerate() {
            let term = pj * binom;
            if u % 2 == 0 {
                out[2 * u + 1] += term;
            } else {
                out[2 * u + 1] -= term;
            }
        }
    }
    DyadicPoly::new(out, p.exponent()).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::linspace;

    #[test]
    fn terms_for_half_and_fifth() {
        let t = SignTerms::new(0.5, 0.2).unwrap();
        assert_eq!(t.k, 10);
        assert!((t.d_cap - (20.0 * 200.0f64.ln()).sqrt()).abs() < 1e-12);
        assert_eq!(SignTerms::degree_bound(0.5, 0.2), 18);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(frostig_sign_poly(0.0, 0.1).is_err());
        assert!(frostig_sign_poly(0.5, 1.0).is_err());
        assert!(compressed_sign_poly(1.5, 0.1).is_err());
        assert!(compressed_power(0, 2.0).is_err());
        assert!(compressed_power(3, 0.0).is_err());
    }

    #[test]
    fn frostig_is_odd_and_accurate() {
        let p = frostig_sign_poly(0.25, 0.1).unwrap();
        assert_eq!(p.eval(0.0), 0.0);
        for z in linspace(-1.0, 1.0, 1001) {
            assert!((p.eval(-z) + p.eval(z)).abs() <= 1e-10);
        }
        let worst = linspace(0.25, 1.0, 10_000)
            .map(|z| (p.eval(z) - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.05, "worst {worst}");
        // Dense-grid value at z = 0.5 (frozen from direct evaluation).
        let at_half = p.eval(0.5);
        assert!((at_half - 1.0).abs() <= 0.05);
        assert_eq!(p.degree(), 2 * p.sign_terms().unwrap() + 1);
    }

    #[test]
    fn compressed_power_base_case() {
        let p = compressed_power(1, 1.0).unwrap();
        for z in linspace(-1.0, 1.0, 11) {
            assert!((p.eval(z) - z).abs() < 1e-15);
        }
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn compressed_power_untruncated_is_monomial() {
        let p = compressed_power(6, 6.0).unwrap();
        let worst = linspace(-1.0, 1.0, 10_000)
            .map(|z| (p.eval(z) - z.powi(6)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn compressed_power_truncation_bound() {
        let p = compressed_power(20, 12.0).unwrap();
        let bound = 2.0 * (-144.0f64 / 40.0).exp();
        let worst = linspace(-1.0, 1.0, 10_000)
            .map(|z| (p.eval(z) - z.powi(20)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= bound, "{worst} > {bound}");
        assert!(p.degree() <= 12);
    }

    #[test]
    fn compressed_sign_small_case() {
        let p = compressed_sign_poly(0.5, 0.2).unwrap();
        assert_eq!(p.eval(0.0), 0.0);
        let certs = certify_sign(&p, 0.5, 0.2, 10_000);
        assert!(certs.iter().all(|c| c.pass));
        assert!(p.compression_degree().unwrap() as f64 <= SignTerms::new(0.5, 0.2).unwrap().d_cap);
    }

    #[test]
    fn exact_sign_product_matches_evaluation() {
        let p = frostig_sign_poly(0.5, 0.2).unwrap();
        let exact = p.exact_monomial();
        assert_eq!(exact.degree(), p.degree());
        for z in linspace(-1.0, 1.0, 101) {
            assert!((exact.eval_exact(z) - p.eval(z)).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_compressed_sign_matches_evaluation() {
        let p = compressed_sign_uncertified(0.25, 0.1).unwrap();
        let exact = p.exact_monomial();
        assert_eq!(exact.degree(), p.degree());
        for z in linspace(-1.0, 1.0, 101) {
            assert!((exact.eval_exact(z) - p.eval(z)).abs() < 1e-11);
        }
    }

    #[test]
    fn window_bounds() {
        assert_eq!(window(5, 1), 2..=3);
        assert_eq!(window(4, 0), 2..=2);
        assert_eq!(window(3, 10), 0..=3);
    }
}
