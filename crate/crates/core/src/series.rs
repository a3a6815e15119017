//! Dense truncated power series about an expansion point `t0`.
//!
//! A [`SeriesPoly`] stores the coefficients `Y(0), ..., Y(cap)` of
//! `y(t) = Σ Y(k) (t - t0)^k`, always padded to exactly `cap + 1` entries.
//! Every operation silently discards degrees above `cap`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoly {
    coeffs: Vec<f64>,
    t0: f64,
}

fn check_finite(coeffs: &[f64]) -> Result<()> {
    match coeffs.iter().position(|c| !c.is_finite()) {
        None => Ok(()),
        Some(index) => Err(Error::Overflow { index }),
    }
}

impl SeriesPoly {
    /// Series about `t0 = 0` whose cap is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Self::with_origin(coeffs, 0.0)
    }

    pub fn with_origin(coeffs: Vec<f64>, t0: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least one coefficient",
            ));
        }
        if !t0.is_finite() {
            return Err(Error::NonFinite {
                what: "expansion point",
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                what: "coefficient",
            });
        }
        Ok(Self { coeffs, t0 })
    }

    /// Series about `t0 = 0` with the given cap; `coeffs` is zero padded or
    /// truncated to `cap + 1` entries.
    pub fn from_slice(coeffs: &[f64], cap: usize) -> Result<Self> {
        let mut padded = vec![0.0; cap + 1];
        let n = coeffs.len().min(cap + 1);
        padded[..n].copy_from_slice(&coeffs[..n]);
        Self::new(padded)
    }

    pub fn zero(cap: usize) -> Self {
        Self {
            coeffs: vec![0.0; cap + 1],
            t0: 0.0,
        }
    }

    pub fn constant(value: f64, cap: usize) -> Result<Self> {
        Self::monomial(value, 0, cap)
    }

    /// `a · t^m` truncated at `cap`.
    pub fn monomial(a: f64, m: usize, cap: usize) -> Result<Self> {
        if m > cap {
            return Err(Error::DegreeOutOfRange { degree: m, cap });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite {
                what: "coefficient",
            });
        }
        let mut s = Self::zero(cap);
        s.coeffs[m] = a;
        Ok(s)
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of degree `k`, zero beyond the cap.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Lowest degree with a nonzero coefficient, `None` for the zero series.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0.0)
    }

    /// Highest degree with a nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    /// Same series re-padded (or truncated) to a new cap.
    pub fn recap(&self, cap: usize) -> Self {
        let mut coeffs = vec![0.0; cap + 1];
        let n = self.coeffs.len().min(cap + 1);
        coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        Self {
            coeffs,
            t0: self.t0,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.t0 != other.t0 {
            return Err(Error::Mismatch {
                what: "expansion points",
            });
        }
        if self.cap() != other.cap() {
            return Err(Error::Mismatch {
                what: "truncation caps",
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        check_finite(&coeffs)?;
        Ok(Self {
            coeffs,
            t0: self.t0,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        check_finite(&coeffs)?;
        Ok(Self {
            coeffs,
            t0: self.t0,
        })
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFinite {
                what: "scale factor",
            });
        }
        let coeffs: Vec<f64> = self.coeffs.iter().map(|a| c * a).collect();
        check_finite(&coeffs)?;
        Ok(Self {
            coeffs,
            t0: self.t0,
        })
    }

    /// `Σ_i c_i · s_i` over series sharing one cap and origin.
    pub fn linear_combination(terms: &[(f64, &SeriesPoly)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or(Error::InvalidArgument("empty linear combination"))?;
        let mut acc = Self {
            coeffs: vec![0.0; first.coeffs.len()],
            t0: first.t0,
        };
        for &(c, s) in terms {
            acc.check_compatible(s)?;
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    what: "scale factor",
                });
            }
            for (a, b) in acc.coeffs.iter_mut().zip(&s.coeffs) {
                *a += c * b;
            }
        }
        check_finite(&acc.coeffs)?;
        Ok(acc)
    }

    /// Cauchy product truncated at the common cap.
    pub fn cauchy_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let cap = self.cap();
        let mut coeffs = vec![0.0; cap + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs[..=cap - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        check_finite(&coeffs)?;
        Ok(Self {
            coeffs,
            t0: self.t0,
        })
    }

    /// `self³`, i.e. coefficient `k` is `Σ_{i+j+l=k} a_i a_j a_l`.
    pub fn cube(&self) -> Result<Self> {
        self.cauchy_mul(self)?.cauchy_mul(self)
    }

    /// Term-wise integral from `t0`; the degree-`cap` term of `self` falls off.
    pub fn antiderivative(&self) -> Self {
        let cap = self.cap();
        let mut coeffs = vec![0.0; cap + 1];
        for k in 1..=cap {
            coeffs[k] = self.coeffs[k - 1] / k as f64;
        }
        Self {
            coeffs,
            t0: self.t0,
        }
    }

    /// Term-wise derivative; the top coefficient of the result is zero.
    pub fn derivative(&self) -> Self {
        let cap = self.cap();
        let mut coeffs = vec![0.0; cap + 1];
        for k in 0..cap {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Self {
            coeffs,
            t0: self.t0,
        }
    }

    /// Horner evaluation of `Σ Y(k) (t - t0)^k`.
    pub fn eval(&self, t: f64) -> f64 {
        let x = t - self.t0;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}
