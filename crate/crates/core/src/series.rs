//! Truncated integer power series without constant term, composition, and
//! the monic eigensequence `B` with `B(B(x)) = B(x)/x - 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `a_1 x + a_2 x^2 + ... + a_N x^N`, exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    /// `coeffs[i]` is the coefficient of `x^(i+1)`.
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    /// Coefficients of `x^1 .. x^N`; the truncation order is their count.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("power series needs truncation order >= 1"));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The series `x` truncated at `order`.
    pub fn x(order: usize) -> Result<Self> {
        let mut c = vec![BigInt::zero(); order];
        if let Some(first) = c.first_mut() {
            *first = BigInt::one();
        }
        Self::new(c)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^n`; zero outside `1..=N`.
    pub fn coeff(&self, n: usize) -> BigInt {
        if n == 0 || n > self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[n - 1].clone()
        }
    }

    /// Product truncated at this series' order.
    fn mul_truncated(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order();
        let mut out = vec![BigInt::zero(); n];
        // x^i * x^j lands at index i + j + 1 (both factors start at x^1)
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j + 1;
                if k >= n {
                    break;
                }
                out[k] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `A(B(x))`, truncated at the common order.
    pub fn compose(&self, inner: &PowerSeries) -> Result<PowerSeries> {
        if self.order() != inner.order() {
            return Err(Error::invalid(format!(
                "truncation orders differ: {} vs {}",
                self.order(),
                inner.order()
            )));
        }
        let n = self.order();
        let mut out = vec![BigInt::zero(); n];
        let mut power = inner.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul_truncated(inner);
            }
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&power.coeffs) {
                *o += a * c;
            }
        }
        Ok(PowerSeries { coeffs: out })
    }
}

/// `[x^n] B(B(x))` using only `b[0..n]` (that is, `b_1..b_n`).
fn self_composition_coeff(b: &[BigInt], n: usize) -> BigInt {
    let inner = PowerSeries {
        coeffs: b[..n].to_vec(),
    };
    let mut total = BigInt::zero();
    let mut power = inner.clone();
    for k in 1..=n {
        if k > 1 {
            power = power.mul_truncated(&inner);
        }
        total += &b[k - 1] * &power.coeffs[n - 1];
    }
    total
}

/// `b_1 .. b_N` of the monic sequence whose self-composition is its left
/// shift.
pub fn eigensequence(n_terms: usize) -> Vec<BigInt> {
    let mut b = Vec::with_capacity(n_terms);
    if n_terms == 0 {
        return b;
    }
    b.push(BigInt::one());
    while b.len() < n_terms {
        let n = b.len();
        let next = self_composition_coeff(&b, n);
        b.push(next);
    }
    b
}

/// True iff `[x^n] B(B(x)) = b_{n+1}` for `1 <= n <= N-1`.
pub fn verify_shift(b: &[BigInt], n_terms: usize) -> bool {
    if b.len() < n_terms || n_terms == 0 {
        return false;
    }
    let Ok(series) = PowerSeries::new(b[..n_terms].to_vec()) else {
        return false;
    };
    let composed = series.compose(&series).expect("same order");
    (1..n_terms).all(|n| composed.coeff(n) == b[n])
}
