//! Variational iteration method with Lagrange multiplier `λ = -1`.
//!
//! Each step applies the correction functional
//!
//! ```text
//! H_{n+1}(t) = H_n(t) - ∫₀ᵗ [H_n' - f(H_n, h_n)] ds
//! ```
//!
//! which, for a first-order equation, is Picard iteration started from the
//! constant initial state. Iterate `n` therefore agrees with the Taylor
//! coefficients through degree `n`. Iterates are polynomials whose degree
//! triples per step through the cubic term, so they are truncated at
//! `degree_cap`.
//!
//! For the delayed model two functionals are available, see
//! [`DelayedFunctional`].

use crate::dtm::OVERFLOW_LIMIT;
use crate::error::{Error, Result};
use crate::models::{CoupledParams, DelayedParams, Model, Solution, SolutionPair};
use crate::series::SeriesPoly;

pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Which form of the delayed equation the correction functional acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DelayedFunctional {
    /// `H' - a·H + b·H³` after dividing by `1 - βσ`. Picard iteration.
    #[default]
    Reduced,
    /// `(1 - βσ)·H' - (α - β)·H + ε·H³` with the leading factor kept. Each
    /// step retains a fraction `βσ` of the previous iterate, so the Taylor
    /// coefficients are approached more slowly than by Picard iteration.
    Unreduced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VimState {
    /// Current iterate for `H`.
    pub sst: SeriesPoly,
    /// Current iterate for `h`; `None` for the delayed model.
    pub depth: Option<SeriesPoly>,
    pub iteration: usize,
    pub degree_cap: usize,
}

impl VimState {
    /// The constant initial iterate of `model`.
    pub fn initial(model: &Model, degree_cap: usize) -> Result<Self> {
        Ok(match model {
            Model::Coupled(p) => Self {
                sst: SeriesPoly::constant(p.sst0, degree_cap)?,
                depth: Some(SeriesPoly::constant(p.depth0, degree_cap)?),
                iteration: 0,
                degree_cap,
            },
            Model::Delayed(p) => Self {
                sst: SeriesPoly::constant(p.sst0, degree_cap)?,
                depth: None,
                iteration: 0,
                degree_cap,
            },
        })
    }

    pub fn solution(&self) -> Result<Solution> {
        match &self.depth {
            Some(h) => Ok(Solution::Coupled(SolutionPair::new(
                self.sst.clone(),
                h.clone(),
            )?)),
            None => Ok(Solution::Delayed(self.sst.clone())),
        }
    }
}

/// Degrees `0..=iteration` agree with the Taylor coefficients and get the
/// same magnitude limit as the transform; the truncated tail above them only
/// has to stay finite.
fn guarded(s: SeriesPoly, iteration: usize) -> Result<SeriesPoly> {
    let exact = iteration.min(s.cap());
    if s.coeffs()[..=exact]
        .iter()
        .any(|c| c.abs() > OVERFLOW_LIMIT)
    {
        return Err(Error::Overflow { index: iteration });
    }
    Ok(s)
}

/// One correction step for the coupled model.
pub fn vim_step_coupled(s: &VimState, p: &CoupledParams) -> Result<VimState> {
    let h = s
        .depth
        .as_ref()
        .ok_or(Error::InvalidArgument("coupled step needs a depth iterate"))?;
    let big = &s.sst;
    let cube = big.cube()?;
    let big_residual = SeriesPoly::linear_combination(&[
        (1.0, &big.derivative()),
        (-p.c, big),
        (-p.eta, h),
        (p.eps, &cube),
    ])?;
    let small_residual =
        SeriesPoly::linear_combination(&[(1.0, &h.derivative()), (p.theta, big), (p.gamma, h)])?;
    let next = s.iteration + 1;
    Ok(VimState {
        sst: guarded(big.sub(&big_residual.antiderivative())?, next)?,
        depth: Some(guarded(h.sub(&small_residual.antiderivative())?, next)?),
        iteration: next,
        degree_cap: s.degree_cap,
    })
}

/// One correction step for the delayed model.
pub fn vim_step_delayed(
    s: &VimState,
    p: &DelayedParams,
    functional: DelayedFunctional,
) -> Result<VimState> {
    let big = &s.sst;
    let cube = big.cube()?;
    let (lead, linear, cubic) = match functional {
        DelayedFunctional::Reduced => {
            let r = p.reduced()?;
            (1.0, r.growth, r.cubic)
        }
        DelayedFunctional::Unreduced => (p.leading_factor()?, p.alpha - p.beta, p.eps),
    };
    let residual = SeriesPoly::linear_combination(&[
        (lead, &big.derivative()),
        (-linear, big),
        (cubic, &cube),
    ])?;
    let next = s.iteration + 1;
    Ok(VimState {
        sst: guarded(big.sub(&residual.antiderivative())?, next)?,
        depth: None,
        iteration: next,
        degree_cap: s.degree_cap,
    })
}

/// `n` steps from the constant initial iterate, reduced functional for the
/// delayed model.
pub fn vim_solve(model: &Model, n: usize, degree_cap: usize) -> Result<VimState> {
    vim_solve_with(model, n, degree_cap, DelayedFunctional::Reduced)
}

pub fn vim_solve_with(
    model: &Model,
    n: usize,
    degree_cap: usize,
    functional: DelayedFunctional,
) -> Result<VimState> {
    let mut state = VimState::initial(model, degree_cap)?;
    for _ in 0..n {
        state = match model {
            Model::Coupled(p) => vim_step_coupled(&state, p)?,
            Model::Delayed(p) => vim_step_delayed(&state, p, functional)?,
        };
    }
    Ok(state)
}
