//! Exact polynomial arithmetic over dyadic rationals.
//!
//! Every exact expansion in this crate has a power-of-two denominator (binomial
//! weights `C(s, j) / 2^s`, central binomials over `4^i`, and f64 inputs), so a
//! single shared exponent per polynomial is enough and no gcd reductions are
//! needed.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial whose coefficient `j` is `numer[j] / 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicPoly {
    numer: Vec<BigInt>,
    exp: u64,
}

/// Splits a finite f64 into `(mantissa, e)` with `x = mantissa * 2^e` exactly.
pub fn f64_to_dyadic(x: f64) -> (BigInt, i64) {
    assert!(x.is_finite(), "cannot convert a non-finite value");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let m = BigInt::from(mant);
    (if negative { -m } else { m }, e)
}

/// `n / 2^exp` rounded to f64; handles numerators far outside the f64 range.
pub fn dyadic_to_f64(n: &BigInt, exp: u64) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let bits = n.bits();
    let (top, shift) = if bits > 64 {
        let s = bits - 64;
        ((n >> s).to_f64().unwrap_or(f64::NAN), s as i64)
    } else {
        (n.to_f64().unwrap_or(f64::NAN), 0)
    };
    let total = shift - exp as i64;
    let total = total.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
    libm::scalbn(top, total)
}

/// `log2 |n / 2^exp|`, or `-inf` for zero.
pub fn dyadic_log2_abs(n: &BigInt, exp: u64) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = n.abs();
    let bits = a.bits();
    let (top, shift) = if bits > 60 {
        let s = bits - 60;
        ((&a >> s).to_f64().unwrap(), s as f64)
    } else {
        (a.to_f64().unwrap(), 0.0)
    };
    top.log2() + shift - exp as f64
}

impl DyadicPoly {
    pub fn new(mut numer: Vec<BigInt>, exp: u64) -> Self {
        while numer.len() > 1 && numer.last().is_some_and(Zero::is_zero) {
            numer.pop();
        }
        if numer.is_empty() {
            numer.push(BigInt::zero());
        }
        Self { numer, exp }
    }

    pub fn from_integers(numer: Vec<BigInt>) -> Self {
        Self::new(numer, 0)
    }

    /// Exact image of a list of f64 coefficients.
    pub fn from_f64_coeffs(coeffs: &[f64]) -> Self {
        let parts: Vec<(BigInt, i64)> = coeffs.iter().map(|&c| f64_to_dyadic(c)).collect();
        let exp = parts
            .iter()
            .filter(|(m, _)| !m.is_zero())
            .map(|&(_, e)| (-e).max(0))
            .max()
            .unwrap_or(0) as u64;
        let numer = parts
            .into_iter()
            .map(|(m, e)| {
                let shift = exp as i64 + e;
                debug_assert!(shift >= 0 || m.is_zero());
                if m.is_zero() {
                    m
                } else {
                    m << (shift as u64)
                }
            })
            .collect();
        Self::new(numer, exp).normalized()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn degree(&self) -> usize {
        self.numer.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(Zero::is_zero)
    }

    pub fn coeff_f64(&self, j: usize) -> f64 {
        self.numer.get(j).map_or(0.0, |n| dyadic_to_f64(n, self.exp))
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.numer.len()).map(|j| self.coeff_f64(j)).collect()
    }

    pub fn log2_abs(&self, j: usize) -> f64 {
        self.numer
            .get(j)
            .map_or(f64::NEG_INFINITY, |n| dyadic_log2_abs(n, self.exp))
    }

    /// Largest `log2 |coefficient|`.
    pub fn max_log2_abs(&self) -> f64 {
        (0..self.numer.len())
            .map(|j| self.log2_abs(j))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when `|coefficient_j| <= 2^bound_log2` for every `j`, decided exactly.
    pub fn coefficients_bounded_by_pow2(&self, bound_log2: f64) -> bool {
        // |n| / 2^exp <= 2^b  <=>  |n| <= 2^(b + exp); for a non-integer exponent
        // compare against floor, then fall back to the float log for the fractional part.
        let total = bound_log2 + self.exp as f64;
        if total < 0.0 {
            return self.is_zero();
        }
        let whole = total.floor() as u64;
        let limit = BigInt::one() << whole;
        self.numer.iter().all(|n| {
            let a = n.abs();
            if a <= limit {
                true
            } else if a > (&limit << 1u64) {
                false
            } else {
                dyadic_log2_abs(n, self.exp) <= bound_log2
            }
        })
    }

    /// Exact Horner evaluation at `z`, rounded once to f64.
    pub fn eval_exact(&self, z: f64) -> f64 {
        let (m, e) = f64_to_dyadic(z);
        let (mant, frac_bits) = if e >= 0 {
            (m << e as u64, 0u64)
        } else {
            (m, (-e) as u64)
        };
        let deg = self.degree();
        let mut acc = self.numer[deg].clone();
        for j in (0..deg).rev() {
            acc = acc * &mant + (&self.numer[j] << (frac_bits * (deg - j) as u64));
        }
        dyadic_to_f64(&acc, self.exp + frac_bits * deg as u64)
    }

    /// Removes common powers of two from the numerators.
    pub fn normalized(mut self) -> Self {
        let tz = self
            .numer
            .iter()
            .filter_map(|n| n.trailing_zeros())
            .min()
            .unwrap_or(0)
            .min(self.exp);
        if tz > 0 {
            for n in &mut self.numer {
                *n >>= tz;
            }
            self.exp -= tz;
        }
        self
    }

    fn with_exponent(&self, exp: u64) -> Vec<BigInt> {
        debug_assert!(exp >= self.exp);
        let shift = exp - self.exp;
        self.numer.iter().map(|n| n << shift).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let exp = self.exp.max(other.exp);
        let a = self.with_exponent(exp);
        let b = other.with_exponent(exp);
        let len = a.len().max(b.len());
        let numer = (0..len)
            .map(|j| {
                let x = a.get(j).cloned().unwrap_or_default();
                let y = b.get(j).cloned().unwrap_or_default();
                x + y
            })
            .collect();
        Self::new(numer, exp)
    }

    /// Multiplies by `2^-shift` (a pure exponent change).
    pub fn scale_pow2(&self, shift: i64) -> Self {
        if shift >= 0 {
            Self::new(self.numer.iter().map(|n| n << shift as u64).collect(), self.exp)
                .normalized()
        } else {
            Self::new(self.numer.clone(), self.exp + (-shift) as u64)
        }
    }

    /// Returns `p((z - shift) / 2)` with `shift` taken exactly from its f64 value.
    pub fn compose_half_shift(&self, shift: f64) -> Self {
        let (a_num, a_e) = f64_to_dyadic(shift);
        // shift = a_num * 2^a_e; write as A / 2^a with a >= 0.
        let (a_big, a) = if a_e >= 0 {
            (a_num << a_e as u64, 0u64)
        } else {
            (a_num, (-a_e) as u64)
        };
        // (z - shift) / 2 = (2^a z - A) / 2^(a+1)
        let lead = BigInt::one() << a;
        let mut acc = DyadicPoly::new(vec![BigInt::zero()], 0);
        for j in (0..self.numer.len()).rev() {
            let mut next = vec![BigInt::zero(); acc.numer.len() + 1];
            for (u, n) in acc.numer.iter().enumerate() {
                if n.is_zero() {
                    continue;
                }
                next[u + 1] += n * &lead;
                next[u] -= n * &a_big;
            }
            let scaled = DyadicPoly::new(next, acc.exp + a + 1);
            let term = DyadicPoly::new(vec![self.numer[j].clone()], self.exp);
            acc = scaled.add(&term);
        }
        acc.normalized()
    }
}
