//! Adomian decomposition method.
//!
//! The solution is split into components `H = Σ u_k`, `h = Σ v_k`. The cubic
//! nonlinearity is expanded as `H³ = Σ A_k` with Adomian polynomials
//!
//! ```text
//! A_k = (1/k!) d^k/dλ^k (Σ λ^i u_i)³ |_{λ=0} = Σ_{i+j+l=k} u_i u_j u_l
//! ```
//!
//! and components follow by integrating the right-hand side one index at a time:
//! `u_{k+1} = ∫₀ᵗ (c·u_k + η·v_k - ε·A_k)`, `v_{k+1} = ∫₀ᵗ (-θ·u_k - γ·v_k)`.
//!
//! With a constant `u_0` the `k`-th component is the single monomial
//! `W(k)·t^k` of the differential transform, so the partial sum of `n`
//! components equals the DTM series of order `n - 1`.

use alloc::vec::Vec;

use crate::dtm::OVERFLOW_LIMIT;
use crate::error::{Error, Result};
use crate::models::{CoupledParams, DelayedParams, Solution, SolutionPair};
use crate::series::SeriesPoly;

#[derive(Debug, Clone, PartialEq)]
pub struct AdmState {
    /// Components `u_0, u_1, ...` of `H`.
    pub sst: Vec<SeriesPoly>,
    /// Components `v_0, v_1, ...` of `h`; `None` for the delayed model.
    pub depth: Option<Vec<SeriesPoly>>,
}

impl AdmState {
    pub fn n_terms(&self) -> usize {
        self.sst.len()
    }

    /// Sum of all computed components.
    pub fn partial_sum(&self) -> Result<Solution> {
        let sst = sum(&self.sst)?;
        match &self.depth {
            Some(v) => Ok(Solution::Coupled(SolutionPair::new(sst, sum(v)?)?)),
            None => Ok(Solution::Delayed(sst)),
        }
    }
}

fn sum(components: &[SeriesPoly]) -> Result<SeriesPoly> {
    let (first, rest) = components
        .split_first()
        .ok_or(Error::InvalidArgument("no components"))?;
    rest.iter().try_fold(first.clone(), |acc, u| acc.add(u))
}

/// Adomian polynomial `A_k` of `u³` from components `u_0..=u_k`.
pub fn adomian_cubic(components: &[SeriesPoly], k: usize) -> Result<SeriesPoly> {
    if components.len() <= k {
        return Err(Error::InvalidArgument(
            "Adomian polynomial needs components 0..=k",
        ));
    }
    let u = &components[..=k];
    let cap = u[0].cap();
    let mut acc = SeriesPoly::zero(cap);
    // pair sums P_m = Σ_{i+j=m} u_i u_j, then A_k = Σ_m P_m u_{k-m}
    for m in 0..=k {
        let mut pair = SeriesPoly::zero(cap);
        for i in 0..=m {
            pair = pair.add(&u[i].cauchy_mul(&u[m - i])?)?;
        }
        acc = acc.add(&pair.cauchy_mul(&u[k - m])?)?;
    }
    Ok(acc)
}

fn validate(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("ADM needs at least one term"));
    }
    if cap < n {
        return Err(Error::InvalidArgument(
            "ADM degree cap must be at least the term count",
        ));
    }
    Ok(())
}

fn guarded(s: SeriesPoly, index: usize) -> Result<SeriesPoly> {
    if s.max_abs() > OVERFLOW_LIMIT {
        return Err(Error::Overflow { index });
    }
    debug_assert!(s.degree().is_none_or(|d| d <= index));
    Ok(s)
}

/// `n` components of the coupled model, each truncated at `cap`.
pub fn adm_solve_coupled(p: &CoupledParams, n: usize, cap: usize) -> Result<AdmState> {
    validate(n, cap)?;
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    u.push(guarded(SeriesPoly::constant(p.sst0, cap)?, 0)?);
    v.push(guarded(SeriesPoly::constant(p.depth0, cap)?, 0)?);
    for k in 0..n - 1 {
        let a_k = adomian_cubic(&u, k)?;
        let du = SeriesPoly::linear_combination(&[(p.c, &u[k]), (p.eta, &v[k]), (-p.eps, &a_k)])?;
        let dv = SeriesPoly::linear_combination(&[(-p.theta, &u[k]), (-p.gamma, &v[k])])?;
        u.push(guarded(du.antiderivative(), k + 1)?);
        v.push(guarded(dv.antiderivative(), k + 1)?);
    }
    Ok(AdmState {
        sst: u,
        depth: Some(v),
    })
}

/// `n` components of the delayed model, each truncated at `cap`.
pub fn adm_solve_delayed(p: &DelayedParams, n: usize, cap: usize) -> Result<AdmState> {
    let r = p.reduced()?;
    validate(n, cap)?;
    let mut u = Vec::with_capacity(n);
    u.push(guarded(SeriesPoly::constant(p.sst0, cap)?, 0)?);
    for k in 0..n - 1 {
        let a_k = adomian_cubic(&u, k)?;
        let du = SeriesPoly::linear_combination(&[(r.growth, &u[k]), (-r.cubic, &a_k)])?;
        u.push(guarded(du.antiderivative(), k + 1)?);
    }
    Ok(AdmState {
        sst: u,
        depth: None,
    })
}
