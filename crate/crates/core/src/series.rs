//! Truncated power series with complex coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Order used when a caller does not pick one.
pub const DEFAULT_ORDER: usize = 8;

/// A power series `sum_{j<=order} a_j s^j`.
///
/// Binary operations between series of different orders truncate to the
/// smaller order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients. An empty vector is treated as
    /// the zero series of order 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// The multiplicative identity.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// `e^{c s}` truncated: coefficient `c^j / j!`.
    pub fn exp_series(c: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = 1.0;
        for j in 0..=order {
            if j > 0 {
                term *= c / j as f64;
            }
            coeffs.push(Complex64::new(term, 0.0));
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `j`, or `None` past the truncation order.
    pub fn get(&self, j: usize) -> Option<Complex64> {
        self.coeffs.get(j).copied()
    }

    /// Coefficient `j`; panics past the truncation order.
    pub fn at(&self, j: usize) -> Complex64 {
        self.coeffs[j]
    }

    pub fn require_order(&self, need: usize) -> Result<()> {
        if self.order() < need {
            return Err(Error::InsufficientOrder {
                have: self.order(),
                need,
            });
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self::new(self.coeffs[..=n].to_vec())
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn convolve(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, &a) in self.coeffs[..=n].iter().enumerate() {
            for (j, &b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `a_j -> (-1)^j a_j`, i.e. the series of `s -> f(-s)`.
    pub fn alternate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { c } else { -c })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// Formal derivative; the order drops by one (order 0 stays at 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        }
    }

    /// Reciprocal series by long division. Needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0.norm() == 0.0 {
            return Err(Error::Pole {
                what: "reciprocal of a series with zero constant term".into(),
            });
        }
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[0] = a0.inv();
        for j in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 1..=j {
                acc += self.coeffs[i] * out[j - i];
            }
            out[j] = -acc / a0;
        }
        Ok(Self { coeffs: out })
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=n).map(|j| self.coeffs[j] + rhs.coeffs[j]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=n).map(|j| self.coeffs[j] - rhs.coeffs[j]).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.convolve(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
