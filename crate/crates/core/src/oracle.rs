//! Ground truth for the series solvers.
//!
//! The delayed model reduces to the Bernoulli equation `H' = a·H - b·H³`.
//! With `w = H⁻²` it becomes linear, `w' = -2a·w + 2b`, so
//!
//! ```text
//! H(t) = sqrt( a / (b + (a·w0 - b)·e^{-2at}) ),   w0 = H(0)⁻²
//! H(t) = (w0 + 2bt)^{-1/2}                         when a = 0
//! ```
//!
//! The coupled model has no elementary closed form; a classical RK4 run with a
//! small step serves as its reference.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::models::{Model, Solution};
use crate::series::SeriesPoly;

/// Closed-form solution of the delayed model at `t`.
pub fn exact_delayed(p: &crate::models::DelayedParams, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "time" });
    }
    let r = p.reduced()?;
    let h0 = p.sst0;
    if h0 == 0.0 {
        return Ok(0.0);
    }
    let w0 = 1.0 / (h0 * h0);
    let (a, b) = (r.growth, r.cubic);
    let w = if a == 0.0 {
        w0 + 2.0 * b * t
    } else {
        // b·(1 - e^{-2at}) + a·w0·e^{-2at}, written to stay accurate for small a·t
        let decay = libm::exp(-2.0 * a * t);
        let denom = -b * libm::expm1(-2.0 * a * t) + a * w0 * decay;
        denom / a
    };
    if w <= 0.0 || !w.is_finite() {
        return Err(Error::Domain { t });
    }
    Ok(h0.signum() / libm::sqrt(w))
}

/// A sampled RK4 solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub ts: Vec<f64>,
    pub sst: Vec<f64>,
    /// `h(t)` samples; `None` for the delayed model.
    pub depth: Option<Vec<f64>>,
    /// Largest integrator step used.
    pub step: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Index of the grid point at `t`, if the grid contains it.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * t.abs().max(1.0);
        let i = self.ts.partition_point(|&s| s < t - tol);
        (i < self.ts.len() && (self.ts[i] - t).abs() <= tol).then_some(i)
    }

    /// `(H, h)` at grid point `t`.
    pub fn at(&self, t: f64) -> Option<(f64, Option<f64>)> {
        let i = self.index_of(t)?;
        Some((self.sst[i], self.depth.as_ref().map(|d| d[i])))
    }
}

#[derive(Clone, Copy)]
enum Rhs {
    Coupled(crate::models::CoupledParams),
    Delayed { growth: f64, cubic: f64 },
}

impl Rhs {
    fn new(model: &Model) -> Result<Self> {
        Ok(match model {
            Model::Coupled(p) => Rhs::Coupled(*p),
            Model::Delayed(p) => {
                let r = p.reduced()?;
                Rhs::Delayed {
                    growth: r.growth,
                    cubic: r.cubic,
                }
            }
        })
    }

    fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        match self {
            Rhs::Coupled(p) => {
                let (a, b) = p.rhs(y[0], y[1]);
                [a, b]
            }
            Rhs::Delayed { growth, cubic } => [growth * y[0] - cubic * y[0] * y[0] * y[0], 0.0],
        }
    }

    fn step(&self, y: [f64; 2], h: f64) -> [f64; 2] {
        let axpy = |y: [f64; 2], k: [f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
        let k1 = self.eval(y);
        let k2 = self.eval(axpy(y, k1, h / 2.0));
        let k3 = self.eval(axpy(y, k2, h / 2.0));
        let k4 = self.eval(axpy(y, k3, h));
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    }
}

fn initial_state(model: &Model) -> [f64; 2] {
    match model {
        Model::Coupled(p) => [p.sst0, p.depth0],
        Model::Delayed(p) => [p.sst0, 0.0],
    }
}

fn substeps(span: f64, max_step: f64) -> usize {
    let n = libm::ceil(span / max_step - 1e-9);
    if n < 1.0 {
        1
    } else {
        n as usize
    }
}

struct Recorder {
    ts: Vec<f64>,
    sst: Vec<f64>,
    depth: Option<Vec<f64>>,
}

impl Recorder {
    fn new(coupled: bool, n: usize) -> Self {
        Self {
            ts: Vec::with_capacity(n),
            sst: Vec::with_capacity(n),
            depth: coupled.then(|| Vec::with_capacity(n)),
        }
    }

    fn push(&mut self, t: f64, y: [f64; 2]) -> Result<()> {
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::BlowUp { t });
        }
        self.ts.push(t);
        self.sst.push(y[0]);
        if let Some(d) = self.depth.as_mut() {
            d.push(y[1]);
        }
        Ok(())
    }

    fn finish(self, step: f64) -> Trajectory {
        Trajectory {
            ts: self.ts,
            sst: self.sst,
            depth: self.depth,
            step,
        }
    }
}

fn check_step(step: f64) -> Result<()> {
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::InvalidArgument(
            "integrator step must be positive and finite",
        ));
    }
    Ok(())
}

/// Classical RK4 from `t = 0` to `t_end` on a uniform grid. The step is
/// shrunk, if needed, so the grid ends exactly at `t_end`.
pub fn rk4(model: &Model, t_end: f64, step: f64) -> Result<Trajectory> {
    check_step(step)?;
    if t_end < 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidArgument(
            "end time must be finite and non-negative",
        ));
    }
    let rhs = Rhs::new(model)?;
    let n = if t_end == 0.0 {
        0
    } else {
        substeps(t_end, step)
    };
    let h = if n == 0 { step } else { t_end / n as f64 };
    let mut rec = Recorder::new(model.is_coupled(), n + 1);
    let mut y = initial_state(model);
    rec.push(0.0, y)?;
    for i in 1..=n {
        y = rhs.step(y, h);
        rec.push(i as f64 * h, y)?;
    }
    Ok(rec.finish(h))
}

/// RK4 sampled exactly at the given times (strictly increasing, starting at
/// or after 0), with steps no larger than `max_step` between samples.
pub fn rk4_on_grid(model: &Model, grid: &[f64], max_step: f64) -> Result<Trajectory> {
    check_step(max_step)?;
    if grid.iter().any(|t| !t.is_finite()) || grid.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidArgument(
            "grid times must be finite and non-negative",
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing"));
    }
    let rhs = Rhs::new(model)?;
    let mut rec = Recorder::new(model.is_coupled(), grid.len());
    let mut y = initial_state(model);
    let mut t = 0.0;
    for &target in grid {
        let span = target - t;
        if span > 0.0 {
            let n = substeps(span, max_step);
            let h = span / n as f64;
            for _ in 0..n {
                y = rhs.step(y, h);
            }
            if !y[0].is_finite() || !y[1].is_finite() {
                return Err(Error::BlowUp { t: target });
            }
        }
        t = target;
        rec.push(target, y)?;
    }
    Ok(rec.finish(max_step))
}

/// Largest coefficient magnitude of `series' - f(series)`, per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub sst: f64,
    pub depth: Option<f64>,
}

impl Residual {
    pub fn max(&self) -> f64 {
        self.depth.map_or(self.sst, |d| self.sst.max(d))
    }
}

fn max_abs_upto(s: &SeriesPoly, upto: usize) -> f64 {
    s.coeffs()[..upto].iter().fold(0.0, |m, c| m.max(c.abs()))
}

/// Residual of substituting `sol` into the model, over coefficient indices
/// `0..upto` (clamped to `0..cap`, the indices the truncated cube leaves exact).
pub fn residual_components(sol: &Solution, model: &Model, upto: usize) -> Result<Residual> {
    let upto = upto.min(sol.sst().cap());
    match (sol, model) {
        (Solution::Coupled(pair), Model::Coupled(p)) => {
            let (big, h) = (&pair.sst, &pair.depth);
            let cube = big.cube()?;
            let r_big = SeriesPoly::linear_combination(&[
                (1.0, &big.derivative()),
                (-p.c, big),
                (-p.eta, h),
                (p.eps, &cube),
            ])?;
            let r_small = SeriesPoly::linear_combination(&[
                (1.0, &h.derivative()),
                (p.theta, big),
                (p.gamma, h),
            ])?;
            Ok(Residual {
                sst: max_abs_upto(&r_big, upto),
                depth: Some(max_abs_upto(&r_small, upto)),
            })
        }
        (Solution::Delayed(big), Model::Delayed(p)) => {
            let r = p.reduced()?;
            let cube = big.cube()?;
            let res = SeriesPoly::linear_combination(&[
                (1.0, &big.derivative()),
                (-r.growth, big),
                (r.cubic, &cube),
            ])?;
            Ok(Residual {
                sst: max_abs_upto(&res, upto),
                depth: None,
            })
        }
        _ => Err(Error::Mismatch {
            what: "solution and model kinds",
        }),
    }
}

/// Maximum residual coefficient over indices `0..cap`.
pub fn residual_check(sol: &Solution, model: &Model) -> Result<f64> {
    Ok(residual_components(sol, model, usize::MAX)?.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtm;
    use crate::models::{CoupledParams, DelayedParams, SolutionPair};

    fn table3(eps: f64) -> DelayedParams {
        DelayedParams::new(0.5, 0.3, 0.25, eps).unwrap()
    }

    #[test]
    fn exact_initial_value() {
        assert_eq!(exact_delayed(&table3(0.05), 0.0).unwrap(), 1.0);
        let p = DelayedParams::new(1.0, 0.5, 0.5, 0.1).unwrap();
        assert!((exact_delayed(&p, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_fixed_point_when_a_equals_b() {
        // α - β = ε gives a = b, and H ≡ 1
        let p = DelayedParams::new(0.5, 0.3, 0.25, 0.2).unwrap();
        for t in [0.0, 0.5, 1.7, 10.0] {
            assert!((exact_delayed(&p, t).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_table_entries() {
        assert!((exact_delayed(&table3(0.05), 0.4).unwrap() - 1.065476869).abs() < 5e-9);
        let p = DelayedParams::new(1.0, 0.5, 0.5, 0.05).unwrap();
        assert!((exact_delayed(&p, 2.0).unwrap() - 2.480426774).abs() < 5e-9);
    }

    #[test]
    fn exact_zero_growth_branch() {
        let p = DelayedParams::new(0.3, 0.3, 0.5, 0.1).unwrap();
        let b = 0.1 / 0.85;
        let t = 1.3;
        let expect = 1.0 / libm::sqrt(1.0 + 2.0 * b * t);
        assert!((exact_delayed(&p, t).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn exact_blow_up_is_a_domain_error() {
        // a = 0, b < 0: w = 1 + 2bt hits zero at t = -1/(2b)
        let p = DelayedParams::new(0.3, 0.3, 0.5, -0.1).unwrap();
        let err = exact_delayed(&p, 100.0).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        assert!(err.is_numeric());
    }

    #[test]
    fn rk4_constant_for_zero_parameters() {
        let m = Model::Coupled(CoupledParams::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap());
        let tr = rk4(&m, 1.0, 0.1).unwrap();
        assert_eq!(tr.len(), 11);
        assert!(tr.sst.iter().all(|&v| v == 1.0));
        assert!(tr.depth.unwrap().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn rk4_matches_exact_on_table3() {
        let p = table3(0.05);
        let tr = rk4(&Model::Delayed(p), 2.0, 1e-3).unwrap();
        for &t in &[0.4, 0.8, 1.2, 1.6, 2.0] {
            let (h, d) = tr.at(t).unwrap();
            assert!(d.is_none());
            assert!((h - exact_delayed(&p, t).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn rk4_grid_hits_requested_times() {
        let p = table3(0.1);
        let grid = [0.0, 0.3, 0.35, 1.0];
        let tr = rk4_on_grid(&Model::Delayed(p), &grid, 1e-3).unwrap();
        assert_eq!(tr.ts, grid);
        for (i, &t) in grid.iter().enumerate() {
            assert!((tr.sst[i] - exact_delayed(&p, t).unwrap()).abs() < 1e-10);
        }
        assert!(rk4_on_grid(&Model::Delayed(p), &[0.5, 0.2], 1e-3).is_err());
    }

    #[test]
    fn rk4_rejects_bad_steps_and_reports_blow_up() {
        let m = Model::Delayed(table3(0.05));
        assert!(rk4(&m, 1.0, 0.0).is_err());
        assert!(rk4(&m, -1.0, 0.1).is_err());
        // H' = -b·H³ with b < 0 blows up at t = 1/(2|b|) ≈ 0.0425
        let m = Model::Delayed(DelayedParams::new(0.3, 0.3, 0.5, -10.0).unwrap());
        assert!(matches!(rk4(&m, 1.0, 0.01), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn residual_of_constant_series() {
        let p = CoupledParams::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap();
        let one = SeriesPoly::constant(1.0, 4).unwrap();
        let sol = Solution::Coupled(SolutionPair::new(one.clone(), one).unwrap());
        let r = residual_components(&sol, &Model::Coupled(p), usize::MAX).unwrap();
        assert!((r.sst - 1.9).abs() < 1e-15);
        assert_eq!(r.depth, Some(2.0));
    }

    #[test]
    fn residual_of_dtm_and_perturbation() {
        let p = CoupledParams::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap();
        let r = dtm::transform_coupled(&p, 20).unwrap();
        let model = Model::Coupled(p);
        let sol = dtm::assemble(&r).unwrap();
        assert!(residual_check(&sol, &model).unwrap() <= 1e-10);

        let mut w = r.sst.clone();
        w[7] += 1e-3;
        let bent = Solution::Coupled(
            SolutionPair::new(SeriesPoly::new(w).unwrap(), sol.depth().unwrap().clone()).unwrap(),
        );
        assert!(residual_check(&bent, &model).unwrap() >= 1e-4);
    }

    #[test]
    fn residual_rejects_mismatched_kinds() {
        let sol = Solution::Delayed(SeriesPoly::constant(1.0, 3).unwrap());
        let m = Model::Coupled(CoupledParams::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap());
        assert!(residual_check(&sol, &m).is_err());
    }
}
