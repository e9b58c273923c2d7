//! Chebyshev polynomials of the first kind and their evaluation.

use num_bigint::BigInt;
use num_traits::Zero;

use super::exact::DyadicPoly;
use super::Polynomial;

/// Monomial coefficients of `T_k` in `i128`, or `None` once a coefficient
/// would overflow.
fn chebyshev_monomial_i128(k: usize) -> Option<Vec<i128>> {
    let mut prev: Vec<i128> = vec![1];
    if k == 0 {
        return Some(prev);
    }
    let mut cur: Vec<i128> = vec![0, 1];
    for _ in 1..k {
        let mut next = vec![0i128; cur.len() + 1];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] = next[j + 1].checked_add(c.checked_mul(2)?)?;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] = next[j].checked_sub(c)?;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Some(cur)
}

fn chebyshev_monomial_big(k: usize) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    if k == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(1)];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += c << 1u32;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Exact integer monomial coefficients of `T_k` via `T_{k+1} = 2z T_k - T_{k-1}`.
pub fn chebyshev_t_integer(k: usize) -> Vec<BigInt> {
    match chebyshev_monomial_i128(k) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => chebyshev_monomial_big(k),
    }
}

/// All of `T_0, ..., T_max` in exact monomial form.
pub fn chebyshev_table(max_k: usize) -> Vec<Vec<BigInt>> {
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(max_k + 1);
    table.push(vec![BigInt::from(1)]);
    if max_k >= 1 {
        table.push(vec![BigInt::zero(), BigInt::from(1)]);
    }
    for k in 2..=max_k {
        let mut next = vec![BigInt::zero(); k + 1];
        for (j, c) in table[k - 1].iter().enumerate() {
            next[j + 1] += c << 1u32;
        }
        for (j, c) in table[k - 2].iter().enumerate() {
            next[j] -= c;
        }
        table.push(next);
    }
    table
}

/// `T_k` carried in both bases.
pub fn chebyshev_t(k: usize) -> Polynomial {
    let monomial = DyadicPoly::from_integers(chebyshev_t_integer(k));
    let mut cheb = vec![0.0; k + 1];
    cheb[k] = 1.0;
    Polynomial::from_both(monomial, cheb)
}

/// Clenshaw recurrence for `sum_l coeffs[l] T_l(z)`.
pub fn clenshaw(coeffs: &[f64], z: f64) -> f64 {
    match coeffs.len() {
        0 => 0.0,
        1 => coeffs[0],
        _ => {
            let two_z = 2.0 * z;
            let (mut b1, mut b2) = (0.0, 0.0);
            for &c in coeffs[1..].iter().rev() {
                let b0 = c + two_z * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            coeffs[0] + z * b1 - b2
        }
    }
}

pub fn horner(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Converts Chebyshev-basis coefficients (sharing the input's dyadic exponent)
/// into exact monomial coefficients.
pub fn chebyshev_to_monomial(cheb: &DyadicPoly) -> DyadicPoly {
    let table = chebyshev_table(cheb.degree());
    let mut out = vec![BigInt::zero(); cheb.degree() + 1];
    for (l, beta) in cheb.numerators().iter().enumerate() {
        if beta.is_zero() {
            continue;
        }
        for (j, t) in table[l].iter().enumerate() {
            if !t.is_zero() {
                out[j] += beta * t;
            }
        }
    }
    DyadicPoly::new(out, cheb.exponent()).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(chebyshev_t(0).monomial_coeffs().unwrap(), &[1.0]);
        assert_eq!(chebyshev_t(1).monomial_coeffs().unwrap(), &[0.0, 1.0]);
        assert_eq!(chebyshev_t(2).monomial_coeffs().unwrap(), &[-1.0, 0.0, 2.0]);
    }

    #[test]
    fn cosine_identity_at_k5() {
        let z: f64 = 0.3;
        let oracle = (5.0 * z.acos()).cos();
        let t5 = chebyshev_t(5);
        assert!((t5.eval(z) - oracle).abs() < 1e-12);
        assert!((t5.eval_horner(z).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn i128_and_bigint_paths_agree() {
        for k in [0, 1, 7, 40, 90] {
            let small = chebyshev_monomial_i128(k).unwrap();
            let big = chebyshev_monomial_big(k);
            let small: Vec<BigInt> = small.into_iter().map(BigInt::from).collect();
            assert_eq!(small, big);
        }
        assert!(chebyshev_monomial_i128(200).is_none());
        assert_eq!(chebyshev_t_integer(200).len(), 201);
    }

    #[test]
    fn table_matches_single() {
        let table = chebyshev_table(25);
        for (k, row) in table.iter().enumerate() {
            assert_eq!(row, &chebyshev_t_integer(k));
        }
    }

    #[test]
    fn coefficients_of_t10_within_pow2_bound() {
        let c = chebyshev_t_integer(10);
        let bound = BigInt::from(1u64 << 20);
        assert!(c.iter().all(|x| x.magnitude() <= bound.magnitude()));
    }

    #[test]
    fn clenshaw_matches_cosine() {
        let coeffs = [0.5, -0.25, 0.125, 2.0];
        for i in 0..=20 {
            let z = -1.0 + 0.1 * i as f64;
            let theta = z.acos();
            let direct: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(l, c)| c * (l as f64 * theta).cos())
                .sum();
            assert!((clenshaw(&coeffs, z) - direct).abs() < 1e-13);
        }
    }
}
