//! Differential transform method.
//!
//! The transform of `y` at `t0` is its scaled Taylor coefficient sequence
//! `Y(k) = y^(k)(t0) / k!`. A derivative shifts the sequence
//! (`(k+1)·Y(k+1)`), a product becomes a Cauchy convolution, so each model
//! turns into an explicit recurrence for its coefficients:
//!
//! ```text
//! coupled:  W(k+1) = (c·W(k) + η·V(k) - ε·N(k)) / (k+1)
//!           V(k+1) = (-θ·W(k) - γ·V(k)) / (k+1)
//! delayed:  W(k+1) = (a·W(k) - b·N(k)) / (k+1),  a = (α-β)/(1-βσ), b = ε/(1-βσ)
//! ```
//!
//! where `N(k)` is the degree-`k` coefficient of `H³`. `N(k)` depends only on
//! `W(0..=k)`, so it is accumulated incrementally: a running square
//! `S(k) = Σ W(i)·W(k-i)` and then `N(k) = Σ S(m)·W(k-m)`, `O(K²)` overall.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::models::{CoupledParams, DelayedParams, Solution, SolutionPair};
use crate::series::SeriesPoly;

/// Coefficients above this magnitude abort the recurrence; they signal an
/// expansion evaluated well outside its radius of convergence.
pub const OVERFLOW_LIMIT: f64 = 1e15;

/// Truncation order used for table reproduction up to `t = 1.6`.
pub const DEFAULT_ORDER: usize = 25;
/// Truncation order used when the grid extends to `t = 2.0`.
pub const EXTENDED_ORDER: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct DtmResult {
    /// Transformed coefficients of `H`, length `order + 1`.
    pub sst: Vec<f64>,
    /// Transformed coefficients of `h`; `None` for the delayed model.
    pub depth: Option<Vec<f64>>,
    /// Transformed cubic term `N(k)` for `k = 0..=order`.
    pub cubic: Vec<f64>,
    pub order: usize,
}

/// Incremental accumulator for the coefficients of `W³`.
struct CubeAccumulator {
    square: Vec<f64>,
}

impl CubeAccumulator {
    fn with_capacity(n: usize) -> Self {
        Self {
            square: Vec::with_capacity(n),
        }
    }

    /// `N(k)` given `w[0..=k]`. Must be called for `k = 0, 1, 2, ...` in order.
    fn next(&mut self, w: &[f64]) -> f64 {
        let k = self.square.len();
        let s: f64 = (0..=k).map(|i| w[i] * w[k - i]).sum();
        self.square.push(s);
        (0..=k).map(|m| self.square[m] * w[k - m]).sum()
    }
}

fn checked(value: f64, index: usize) -> Result<f64> {
    if value.is_finite() && value.abs() <= OVERFLOW_LIMIT {
        Ok(value)
    } else {
        Err(Error::Overflow { index })
    }
}

/// Transformed coefficients of the coupled model up to `order`.
pub fn transform_coupled(p: &CoupledParams, order: usize) -> Result<DtmResult> {
    let mut w = Vec::with_capacity(order + 1);
    let mut v = Vec::with_capacity(order + 1);
    let mut n = Vec::with_capacity(order + 1);
    let mut cube = CubeAccumulator::with_capacity(order + 1);
    w.push(checked(p.sst0, 0)?);
    v.push(checked(p.depth0, 0)?);
    for k in 0..order {
        let nk = cube.next(&w);
        n.push(nk);
        let denom = (k + 1) as f64;
        let w_next = (p.c * w[k] + p.eta * v[k] - p.eps * nk) / denom;
        let v_next = (-p.theta * w[k] - p.gamma * v[k]) / denom;
        w.push(checked(w_next, k + 1)?);
        v.push(checked(v_next, k + 1)?);
    }
    n.push(cube.next(&w));
    Ok(DtmResult {
        sst: w,
        depth: Some(v),
        cubic: n,
        order,
    })
}

/// Transformed coefficients of the delayed model up to `order`.
pub fn transform_delayed(p: &DelayedParams, order: usize) -> Result<DtmResult> {
    let r = p.reduced()?;
    let mut w = Vec::with_capacity(order + 1);
    let mut n = Vec::with_capacity(order + 1);
    let mut cube = CubeAccumulator::with_capacity(order + 1);
    w.push(checked(p.sst0, 0)?);
    for k in 0..order {
        let nk = cube.next(&w);
        n.push(nk);
        let w_next = (r.growth * w[k] - r.cubic * nk) / (k + 1) as f64;
        w.push(checked(w_next, k + 1)?);
    }
    n.push(cube.next(&w));
    Ok(DtmResult {
        sst: w,
        depth: None,
        cubic: n,
        order,
    })
}

/// Inverse transform: the truncated series `Σ W(k) t^k` (and `Σ V(k) t^k`).
pub fn assemble(r: &DtmResult) -> Result<Solution> {
    let sst = SeriesPoly::new(r.sst.clone())?;
    match &r.depth {
        Some(v) => Ok(Solution::Coupled(SolutionPair::new(
            sst,
            SeriesPoly::new(v.clone())?,
        )?)),
        None => Ok(Solution::Delayed(sst)),
    }
}
