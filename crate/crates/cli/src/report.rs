//! CSV reports: comparison tables, error curves, sweeps and trajectories.
//!
//! Solution values are printed with 9 decimals. Cells whose solver failed
//! read `error: <reason>` and the failure is also listed in the returned
//! report, so callers can exit non-zero while still emitting the rest.

use std::ops::RangeInclusive;

use enso_core::Model;

use crate::spec::{column_name, evaluate, Method, Settings, State, TableSpec};
use crate::CliError;

/// CSV text plus the cells that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub csv: String,
    pub failures: Vec<String>,
}

impl Output {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn fmt_value(v: f64) -> String {
    format!("{v:.9}")
}

pub fn fmt_error(v: f64) -> String {
    format!("{v:.9e}")
}

/// Grid time with 9 decimals and trailing zeros dropped.
pub fn fmt_time(t: f64) -> String {
    let s = format!("{t:.9}");
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

fn error_cell(e: &impl std::fmt::Display) -> String {
    format!("error: {e}")
}

fn to_csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One row per grid time, one column per `(method, ε)` with `H` values.
pub fn cmd_table(spec: &TableSpec) -> Result<Output, CliError> {
    spec.validate()?;
    let mut header = vec!["t".to_string()];
    let mut columns = Vec::new();
    let mut failures = Vec::new();
    for &m in &spec.methods {
        for &eps in &spec.eps {
            let name = column_name(m, eps);
            let values = evaluate(m, &spec.model_for(eps)?, &spec.grid, &spec.settings)?;
            let cells: Vec<String> = values
                .iter()
                .zip(&spec.grid)
                .map(|(v, &t)| match v {
                    Ok((h, _)) => fmt_value(*h),
                    Err(e) => {
                        failures.push(format!("{name} at t={}: {e}", fmt_time(t)));
                        error_cell(e)
                    }
                })
                .collect();
            header.push(name);
            columns.push(cells);
        }
    }
    let rows: Vec<Vec<String>> = spec
        .grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            std::iter::once(fmt_time(t))
                .chain(columns.iter().map(|c| c[i].clone()))
                .collect()
        })
        .collect();
    Ok(Output {
        csv: to_csv(&header, &rows)?,
        failures,
    })
}

/// One line of an error report: `|H_method - H_oracle|` per method at one
/// `(ε, σ, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub model: Model,
    pub t: f64,
    /// Same order as [`ErrorReport::methods`].
    pub errors: Vec<Result<f64, String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub oracle: Method,
    pub methods: Vec<Method>,
    pub settings: Settings,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn failures(&self) -> Vec<String> {
        self.rows
            .iter()
            .flat_map(|r| {
                self.methods
                    .iter()
                    .zip(&r.errors)
                    .filter_map(move |(m, e)| {
                        e.as_ref()
                            .err()
                            .map(|msg| format!("err_{} at t={}: {msg}", m.label(), fmt_time(r.t)))
                    })
            })
            .collect()
    }

    /// Errors of `method` in row order; `None` where it failed.
    pub fn column(&self, method: Method) -> Option<Vec<Option<f64>>> {
        let i = self.methods.iter().position(|&m| m == method)?;
        Some(
            self.rows
                .iter()
                .map(|r| r.errors[i].as_ref().ok().copied())
                .collect(),
        )
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let coupled = self.rows.first().is_some_and(|r| r.model.is_coupled());
        let params: &[&str] = if coupled {
            &["c", "eta", "gamma", "theta", "eps", "t"]
        } else {
            &["alpha", "beta", "sigma", "eps", "t"]
        };
        let header: Vec<String> = params
            .iter()
            .map(|s| s.to_string())
            .chain(self.methods.iter().map(|m| format!("err_{}", m.label())))
            .collect();
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let p = match &r.model {
                    Model::Coupled(p) => vec![p.c, p.eta, p.gamma, p.theta, p.eps],
                    Model::Delayed(p) => vec![p.alpha, p.beta, p.sigma, p.eps],
                };
                p.into_iter()
                    .map(|v| v.to_string())
                    .chain(std::iter::once(fmt_time(r.t)))
                    .chain(r.errors.iter().map(|e| match e {
                        Ok(v) => fmt_error(*v),
                        Err(msg) => format!("error: {msg}"),
                    }))
                    .collect()
            })
            .collect();
        to_csv(&header, &rows)
    }
}

/// Absolute deviation of every series method from `oracle`, for each `ε` of
/// the spec and, for the delayed model, each `σ` in `sigmas` (an empty list
/// keeps the spec's `σ`).
pub fn cmd_errors(
    spec: &TableSpec,
    oracle: Method,
    sigmas: &[f64],
) -> Result<ErrorReport, CliError> {
    spec.validate()?;
    if !matches!(oracle, Method::Exact | Method::Rk4) {
        return Err(CliError::usage("the oracle must be exact or rk4"));
    }
    if oracle == Method::Exact && spec.model.is_coupled() {
        return Err(CliError::usage(
            "the coupled model has no closed form; use the rk4 oracle",
        ));
    }
    let methods: Vec<Method> = spec
        .methods
        .iter()
        .copied()
        .filter(|m| !matches!(m, Method::Exact | Method::Rk4))
        .collect();
    if methods.is_empty() {
        return Err(CliError::usage("no series method to compare"));
    }
    let models: Vec<Model> = match (&spec.model, sigmas.is_empty()) {
        (_, true) => spec
            .eps
            .iter()
            .map(|&e| spec.model_for(e))
            .collect::<Result<_, _>>()?,
        (Model::Coupled(_), false) => {
            return Err(CliError::usage("--sigma applies only to the delayed model"))
        }
        (Model::Delayed(p), false) => {
            let mut out = Vec::new();
            for &sigma in sigmas {
                for &eps in &spec.eps {
                    let q = enso_core::DelayedParams::new(p.alpha, p.beta, sigma, eps)?
                        .with_initial(p.sst0)?;
                    out.push(Model::Delayed(q));
                }
            }
            out
        }
    };

    let mut rows = Vec::new();
    for model in &models {
        let truth = evaluate(oracle, model, &spec.grid, &spec.settings)?;
        let solved: Vec<Vec<Result<State, enso_core::Error>>> = methods
            .iter()
            .map(|&m| evaluate(m, model, &spec.grid, &spec.settings))
            .collect::<Result<_, _>>()?;
        for (i, &t) in spec.grid.iter().enumerate() {
            let errors = solved
                .iter()
                .map(|col| match (&col[i], &truth[i]) {
                    (Ok((h, _)), Ok((h_ref, _))) => {
                        let e = (h - h_ref).abs();
                        if e.is_finite() {
                            Ok(e)
                        } else {
                            Err("non-finite error".to_string())
                        }
                    }
                    (Err(e), _) => Err(e.to_string()),
                    (_, Err(e)) => Err(format!("oracle: {e}")),
                })
                .collect();
            rows.push(ErrorRow {
                model: *model,
                t,
                errors,
            });
        }
    }
    Ok(ErrorReport {
        oracle,
        methods,
        settings: spec.settings,
        rows,
    })
}

/// Deviation from a target column for each truncation level of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub method: Method,
    /// `(level, max |value - target|)`; failed levels carry the reason.
    pub rows: Vec<(usize, Result<f64, String>)>,
}

impl SweepReport {
    /// Level with the smallest deviation; the lowest level wins ties.
    pub fn best(&self) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .filter_map(|(l, d)| d.as_ref().ok().map(|&d| (*l, d)))
            .fold(None, |best, (l, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((l, d)),
            })
    }

    pub fn deviation(&self, level: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|(l, _)| *l == level)
            .and_then(|(_, d)| d.as_ref().ok().copied())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let level = if self.method == Method::Vim {
            "iterations"
        } else {
            "order"
        };
        let header = ["method", level, "max_abs_deviation", "best"].map(String::from);
        let best = self.best().map(|(l, _)| l);
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(l, d)| {
                vec![
                    self.method.label().to_string(),
                    l.to_string(),
                    match d {
                        Ok(v) => fmt_error(*v),
                        Err(msg) => format!("error: {msg}"),
                    },
                    if best == Some(*l) { "*" } else { "" }.to_string(),
                ]
            })
            .collect();
        to_csv(&header, &rows)
    }
}

/// Settings with the truncation level of `method` set to `level`. For ADM the
/// level is the highest component index, so `level + 1` terms are summed and
/// its scale matches the DTM order.
pub fn settings_at_level(method: Method, level: usize, base: &Settings) -> Settings {
    match method {
        Method::Dtm => Settings {
            order: level,
            ..*base
        },
        Method::Adm => Settings {
            terms: level + 1,
            ..*base
        },
        Method::Vim => Settings {
            iters: level,
            ..*base
        },
        Method::Exact | Method::Rk4 => *base,
    }
}

/// For each level in `levels`, the largest `|H(t) - target(t)|` over `grid`.
pub fn cmd_sweep(
    model: &Model,
    grid: &[f64],
    target: &[f64],
    method: Method,
    levels: RangeInclusive<usize>,
    base: &Settings,
) -> Result<SweepReport, CliError> {
    if matches!(method, Method::Exact | Method::Rk4) {
        return Err(CliError::usage("sweeps apply to dtm, adm or vim"));
    }
    if grid.len() != target.len() || grid.is_empty() {
        return Err(CliError::usage("target column and t grid differ in length"));
    }
    let mut rows = Vec::new();
    for level in levels {
        let s = settings_at_level(method, level, base);
        let values = evaluate(method, model, grid, &s)?;
        let dev = values
            .iter()
            .zip(target)
            .try_fold(0.0_f64, |m, (v, &want)| match v {
                Ok((h, _)) if h.is_finite() => Ok(m.max((h - want).abs())),
                Ok(_) => Err("non-finite value".to_string()),
                Err(e) => Err(e.to_string()),
            });
        rows.push((level, dev));
    }
    Ok(SweepReport { method, rows })
}

/// `t` followed by `H_<method>` (and `h_<method>` for the coupled model)
/// for each method.
pub fn cmd_trajectory(
    model: &Model,
    grid: &[f64],
    methods: &[Method],
    settings: &Settings,
) -> Result<Output, CliError> {
    if methods.is_empty() {
        return Err(CliError::usage("at least one method is required"));
    }
    let mut header = vec!["t".to_string()];
    let mut columns: Vec<Vec<String>> = Vec::new();
    let mut failures = Vec::new();
    for &m in methods {
        let values = evaluate(m, model, grid, settings)?;
        let mut big = Vec::with_capacity(grid.len());
        let mut small = Vec::with_capacity(grid.len());
        for (v, &t) in values.iter().zip(grid) {
            match v {
                Ok((h, d)) => {
                    big.push(fmt_value(*h));
                    small.push(d.map(fmt_value).unwrap_or_default());
                }
                Err(e) => {
                    failures.push(format!("{} at t={}: {e}", m.label(), fmt_time(t)));
                    big.push(error_cell(e));
                    small.push(error_cell(e));
                }
            }
        }
        header.push(format!("H_{}", m.label()));
        columns.push(big);
        if model.is_coupled() {
            header.push(format!("h_{}", m.label()));
            columns.push(small);
        }
    }
    let rows: Vec<Vec<String>> = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            std::iter::once(fmt_time(t))
                .chain(columns.iter().map(|c| c[i].clone()))
                .collect()
        })
        .collect();
    Ok(Output {
        csv: to_csv(&header, &rows)?,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_formatting() {
        assert_eq!(fmt_time(0.0), "0.0");
        assert_eq!(fmt_time(0.2), "0.2");
        assert_eq!(fmt_time(1.2000000000000002), "1.2");
        assert_eq!(fmt_time(0.125), "0.125");
        assert_eq!(fmt_value(1.0), "1.000000000");
        assert_eq!(fmt_error(0.0), "0.000000000e0");
    }

    #[test]
    fn best_prefers_lowest_level_on_ties() {
        let r = SweepReport {
            method: Method::Dtm,
            rows: vec![
                (1, Ok(0.5)),
                (2, Ok(0.1)),
                (3, Err("x".into())),
                (4, Ok(0.1)),
            ],
        };
        assert_eq!(r.best(), Some((2, 0.1)));
        assert_eq!(r.deviation(3), None);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("method,order,max_abs_deviation,best\n"));
        assert!(csv.contains("DTM,2,1.000000000e-1,*\n"));
        assert!(csv.contains("DTM,3,error: x,\n"));
    }

    #[test]
    fn adm_level_is_dtm_order() {
        let s = settings_at_level(Method::Adm, 13, &Settings::default());
        assert_eq!(s.terms, 14);
    }
}
