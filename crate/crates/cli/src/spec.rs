//! What to compute: methods, solver settings, grids and table specs.

use clap::ValueEnum;
use enso_core::vim::{DelayedFunctional, DEFAULT_DEGREE_CAP};
use enso_core::{adm, dtm, oracle, vim, Model, Solution};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Method {
    Exact,
    Rk4,
    Dtm,
    Adm,
    Vim,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Exact => "Exact",
            Method::Rk4 => "RK4",
            Method::Dtm => "DTM",
            Method::Adm => "ADM",
            Method::Vim => "VIM",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [
            Method::Exact,
            Method::Rk4,
            Method::Dtm,
            Method::Adm,
            Method::Vim,
        ]
        .into_iter()
        .find(|m| m.label().eq_ignore_ascii_case(label))
    }
}

/// Column header used in table output and in the bundled target tables.
pub fn column_name(method: Method, eps: f64) -> String {
    format!("{}[eps={}]", method.label(), eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum VimFunctional {
    #[default]
    Reduced,
    Unreduced,
}

impl From<VimFunctional> for DelayedFunctional {
    fn from(f: VimFunctional) -> Self {
        match f {
            VimFunctional::Reduced => DelayedFunctional::Reduced,
            VimFunctional::Unreduced => DelayedFunctional::Unreduced,
        }
    }
}

/// Truncation orders, term counts and iteration counts for every method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// DTM truncation order `K`.
    pub order: usize,
    /// ADM component count.
    pub terms: usize,
    /// VIM iteration count.
    pub iters: usize,
    /// Degree cap of VIM iterates.
    pub degree_cap: usize,
    pub vim_functional: DelayedFunctional,
    /// Largest RK4 step between output points.
    pub rk4_step: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            order: dtm::DEFAULT_ORDER,
            terms: dtm::DEFAULT_ORDER + 1,
            iters: 15,
            degree_cap: DEFAULT_DEGREE_CAP,
            vim_functional: DelayedFunctional::Reduced,
            rk4_step: 1e-4,
        }
    }
}

impl Settings {
    /// Settings whose ADM term count follows the DTM order.
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            terms: order + 1,
            ..Self::default()
        }
    }
}

/// `(H, h)` at one time; `h` is `None` for the delayed model.
pub type State = (f64, Option<f64>);

fn series_states(sol: &Solution, grid: &[f64]) -> Vec<Result<State, enso_core::Error>> {
    grid.iter()
        .map(|&t| Ok((sol.sst().eval(t), sol.depth().map(|d| d.eval(t)))))
        .collect()
}

fn repeat_err<T>(e: enso_core::Error, n: usize) -> Vec<Result<T, enso_core::Error>> {
    (0..n).map(|_| Err(e.clone())).collect()
}

/// Solution of `model` by `method` at every grid time. Whole-solve failures
/// are repeated on every point; the closed form fails point by point.
pub fn evaluate(
    method: Method,
    model: &Model,
    grid: &[f64],
    settings: &Settings,
) -> Result<Vec<Result<State, enso_core::Error>>, CliError> {
    let solved = |r: Result<Solution, enso_core::Error>| match r {
        Ok(sol) => series_states(&sol, grid),
        Err(e) => repeat_err(e, grid.len()),
    };
    Ok(match method {
        Method::Dtm => {
            let r = match model {
                Model::Coupled(p) => dtm::transform_coupled(p, settings.order),
                Model::Delayed(p) => dtm::transform_delayed(p, settings.order),
            };
            solved(r.and_then(|r| dtm::assemble(&r)))
        }
        Method::Adm => {
            let (n, cap) = (settings.terms, settings.terms);
            let r = match model {
                Model::Coupled(p) => adm::adm_solve_coupled(p, n, cap),
                Model::Delayed(p) => adm::adm_solve_delayed(p, n, cap),
            };
            solved(r.and_then(|s| s.partial_sum()))
        }
        Method::Vim => solved(
            vim::vim_solve_with(
                model,
                settings.iters,
                settings.degree_cap,
                settings.vim_functional,
            )
            .and_then(|s| s.solution()),
        ),
        Method::Exact => match model {
            Model::Delayed(p) => grid
                .iter()
                .map(|&t| oracle::exact_delayed(p, t).map(|h| (h, None)))
                .collect(),
            Model::Coupled(_) => {
                return Err(CliError::usage(
                    "the closed-form solution exists only for the delayed model",
                ))
            }
        },
        Method::Rk4 => match oracle::rk4_on_grid(model, grid, settings.rk4_step) {
            Ok(tr) => (0..tr.len())
                .map(|i| Ok((tr.sst[i], tr.depth.as_ref().map(|d| d[i]))))
                .collect(),
            Err(e) => repeat_err(e, grid.len()),
        },
    })
}

/// `0, step, 2·step, ..., t_max`; `t_max` must be a whole number of steps.
pub fn uniform_grid(t_max: f64, t_step: f64) -> Result<Vec<f64>, CliError> {
    if t_step <= 0.0 || !t_step.is_finite() || t_max < 0.0 || !t_max.is_finite() {
        return Err(CliError::usage("--t-max must be >= 0 and --t-step > 0"));
    }
    let n = (t_max / t_step).round();
    if (n * t_step - t_max).abs() > 1e-9 * t_max.max(1.0) {
        return Err(CliError::usage(
            "--t-max must be a whole multiple of --t-step",
        ));
    }
    let n = n as usize;
    if n == 0 {
        return Ok(vec![0.0]);
    }
    Ok((0..=n).map(|i| i as f64 * t_max / n as f64).collect())
}

/// A comparison table: one row per grid time, one column per (method, ε).
#[derive(Debug, Clone, PartialEq)]
pub struct TableSpec {
    /// Base parameters; `eps` is replaced column by column.
    pub model: Model,
    pub grid: Vec<f64>,
    pub eps: Vec<f64>,
    pub methods: Vec<Method>,
    pub settings: Settings,
}

impl TableSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.is_empty() || self.grid[0] != 0.0 {
            return Err(CliError::usage("the t grid must start at 0"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::usage("the t grid must be strictly increasing"));
        }
        if self.eps.is_empty() {
            return Err(CliError::usage("at least one --eps value is required"));
        }
        if self.methods.is_empty() {
            return Err(CliError::usage("at least one method is required"));
        }
        if self.model.is_coupled() && self.methods.contains(&Method::Exact) {
            return Err(CliError::usage(
                "the closed-form solution exists only for the delayed model",
            ));
        }
        Ok(())
    }

    /// The model with `ε` replaced.
    pub fn model_for(&self, eps: f64) -> Result<Model, CliError> {
        Ok(self.model.with_eps(eps)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use enso_core::CoupledParams;

    #[test]
    fn grid_construction() {
        let g = uniform_grid(1.0, 0.2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[5], 1.0);
        assert!((g[3] - 0.6).abs() < 1e-15);
        assert_eq!(uniform_grid(0.0, 0.1).unwrap(), vec![0.0]);
        assert!(uniform_grid(1.0, 0.3).is_err());
        assert!(uniform_grid(1.0, 0.0).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for m in [
            Method::Exact,
            Method::Rk4,
            Method::Dtm,
            Method::Adm,
            Method::Vim,
        ] {
            assert_eq!(Method::from_label(m.label()), Some(m));
        }
        assert_eq!(column_name(Method::Dtm, 0.05), "DTM[eps=0.05]");
    }

    #[test]
    fn exact_rejected_for_coupled_model() {
        let spec = TableSpec {
            model: Model::Coupled(CoupledParams::new(1.0, 1.0, 1.0, 1.0, 0.1).unwrap()),
            grid: vec![0.0, 0.5],
            eps: vec![0.1],
            methods: vec![Method::Exact],
            settings: Settings::default(),
        };
        assert_eq!(spec.validate().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn evaluate_reports_overflow_per_point() {
        let model = Model::Coupled(CoupledParams::new(1e9, 0.0, 0.0, 0.0, 0.0).unwrap());
        let out = evaluate(Method::Dtm, &model, &[0.0, 1.0], &Settings::default()).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out
            .iter()
            .all(|r| r.as_ref().is_err_and(|e| e.is_numeric())));
    }
}
