//! Parameter sets and right-hand sides of the two oscillator models.
//!
//! Coupled recharge oscillator (SST anomaly `H`, thermocline depth anomaly `h`):
//!
//! ```text
//! dH/dt = c·H + η·h - ε·H³
//! dh/dt = -θ·H - γ·h
//! ```
//!
//! Delayed oscillator, with the delay folded into a constant factor:
//!
//! ```text
//! (1 - β·σ) dH/dt = (α - β)·H - ε·H³
//! ```

use crate::error::{Error, Result};
use crate::series::SeriesPoly;

/// `|1 - βσ|` at or below this is treated as singular.
const SINGULAR_TOL: f64 = 4.0 * f64::EPSILON;

fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledParams {
    pub c: f64,
    pub eta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub eps: f64,
    /// `H(0)`.
    pub sst0: f64,
    /// `h(0)`.
    pub depth0: f64,
}

impl CoupledParams {
    /// Parameters with the standard initial state `H(0) = h(0) = 1`.
    pub fn new(c: f64, eta: f64, gamma: f64, theta: f64, eps: f64) -> Result<Self> {
        Self {
            c,
            eta,
            gamma,
            theta,
            eps,
            sst0: 1.0,
            depth0: 1.0,
        }
        .validated()
    }

    pub fn with_initial(mut self, sst0: f64, depth0: f64) -> Result<Self> {
        self.sst0 = sst0;
        self.depth0 = depth0;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        finite(self.c, "parameter c")?;
        finite(self.eta, "parameter eta")?;
        finite(self.gamma, "parameter gamma")?;
        finite(self.theta, "parameter theta")?;
        finite(self.eps, "parameter eps")?;
        finite(self.sst0, "initial H")?;
        finite(self.depth0, "initial h")?;
        Ok(self)
    }

    /// Whether `0 < ε < 1`, the range the model is posed for. Values outside
    /// are still accepted.
    pub fn eps_in_range(&self) -> bool {
        self.eps > 0.0 && self.eps < 1.0
    }

    /// `(dH/dt, dh/dt)` at the state `(sst, depth)`.
    pub fn rhs(&self, sst: f64, depth: f64) -> (f64, f64) {
        (
            self.c * sst + self.eta * depth - self.eps * sst * sst * sst,
            -self.theta * sst - self.gamma * depth,
        )
    }
}

/// Coefficients of the normalized delayed model `dH/dt = a·H - b·H³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoeffs {
    /// `a = (α - β) / (1 - βσ)`
    pub growth: f64,
    /// `b = ε / (1 - βσ)`
    pub cubic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayedParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub eps: f64,
    /// `H(0)`.
    pub sst0: f64,
}

impl DelayedParams {
    /// Parameters with `H(0) = 1`. Rejects non-finite values and `βσ = 1`.
    pub fn new(alpha: f64, beta: f64, sigma: f64, eps: f64) -> Result<Self> {
        Self {
            alpha,
            beta,
            sigma,
            eps,
            sst0: 1.0,
        }
        .validated()
    }

    pub fn with_initial(mut self, sst0: f64) -> Result<Self> {
        self.sst0 = sst0;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        finite(self.alpha, "parameter alpha")?;
        finite(self.beta, "parameter beta")?;
        finite(self.sigma, "parameter sigma")?;
        finite(self.eps, "parameter eps")?;
        finite(self.sst0, "initial H")?;
        self.leading_factor()?;
        Ok(self)
    }

    /// `1 - βσ`, the factor multiplying `dH/dt`.
    pub fn leading_factor(&self) -> Result<f64> {
        let m = 1.0 - self.beta * self.sigma;
        if m.abs() <= SINGULAR_TOL {
            Err(Error::SingularModel {
                beta_sigma: self.beta * self.sigma,
            })
        } else {
            Ok(m)
        }
    }

    /// Whether all four constants are positive, as the physical model asks.
    pub fn is_physical(&self) -> bool {
        self.alpha > 0.0 && self.beta > 0.0 && self.sigma > 0.0 && self.eps > 0.0
    }

    pub fn reduced(&self) -> Result<ReducedCoeffs> {
        let m = self.leading_factor()?;
        Ok(ReducedCoeffs {
            growth: (self.alpha - self.beta) / m,
            cubic: self.eps / m,
        })
    }
}

/// Either model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Coupled(CoupledParams),
    Delayed(DelayedParams),
}

impl Model {
    pub fn is_coupled(&self) -> bool {
        matches!(self, Model::Coupled(_))
    }

    pub fn eps(&self) -> f64 {
        match self {
            Model::Coupled(p) => p.eps,
            Model::Delayed(p) => p.eps,
        }
    }

    /// Same model with a different `ε`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Ok(match *self {
            Model::Coupled(p) => Model::Coupled(CoupledParams { eps, ..p }.validated()?),
            Model::Delayed(p) => Model::Delayed(DelayedParams { eps, ..p }.validated()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    /// SST anomaly series `H(t)`.
    pub sst: SeriesPoly,
    /// Thermocline depth anomaly series `h(t)`.
    pub depth: SeriesPoly,
}

impl SolutionPair {
    pub fn new(sst: SeriesPoly, depth: SeriesPoly) -> Result<Self> {
        if sst.cap() != depth.cap() {
            return Err(Error::Mismatch {
                what: "truncation caps",
            });
        }
        if sst.t0() != depth.t0() {
            return Err(Error::Mismatch {
                what: "expansion points",
            });
        }
        Ok(Self { sst, depth })
    }
}

/// A series solution of either model.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Coupled(SolutionPair),
    Delayed(SeriesPoly),
}

impl Solution {
    pub fn sst(&self) -> &SeriesPoly {
        match self {
            Solution::Coupled(pair) => &pair.sst,
            Solution::Delayed(s) => s,
        }
    }

    pub fn depth(&self) -> Option<&SeriesPoly> {
        match self {
            Solution::Coupled(pair) => Some(&pair.depth),
            Solution::Delayed(_) => None,
        }
    }
}
