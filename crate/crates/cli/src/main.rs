use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use enso_cli::report::{cmd_errors, cmd_sweep, cmd_table, cmd_trajectory};
use enso_cli::spec::{uniform_grid, Method, Settings, TableSpec, VimFunctional};
use enso_cli::tables::{BundledTable, TargetTable};
use enso_cli::CliError;
use enso_core::{CoupledParams, DelayedParams, Model};

#[derive(Parser)]
#[command(
    name = "enso",
    version,
    about = "Series solutions of the ENSO oscillator models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solution values per (method, eps) on a t grid.
    Table {
        #[command(flatten)]
        common: Common,
        /// Methods to tabulate (comma separated).
        #[arg(long, value_delimiter = ',')]
        methods: Vec<Method>,
    },
    /// Absolute errors of DTM, ADM and VIM against an oracle.
    Errors {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        methods: Vec<Method>,
        /// Reference solution; defaults to exact for the delayed model.
        #[arg(long)]
        oracle: Option<OracleArg>,
    },
    /// Deviation from a target column over a range of orders or iterations.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 30)]
        to: usize,
        /// CSV file with a `t` column; defaults to the bundled --table.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Target column header, e.g. `DTM[eps=0.1]`.
        #[arg(long)]
        column: Option<String>,
    },
    /// H (and h) per method on a t grid, for plotting.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        methods: Vec<Method>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Exact,
    Rk4,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Coupled,
    Delayed,
}

#[derive(Args)]
struct Common {
    /// Start from a bundled table (1-4); other flags override its values.
    #[arg(long)]
    table: Option<u8>,
    #[arg(long)]
    model: Option<ModelArg>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Repeatable; several values sweep sigma in `errors`.
    #[arg(long, allow_negative_numbers = true)]
    sigma: Vec<f64>,
    /// Repeatable.
    #[arg(long, allow_negative_numbers = true)]
    eps: Vec<f64>,
    /// DTM truncation order.
    #[arg(long)]
    order: Option<usize>,
    /// ADM component count; defaults to order + 1.
    #[arg(long)]
    terms: Option<usize>,
    /// VIM iteration count.
    #[arg(long)]
    iters: Option<usize>,
    /// Degree cap of VIM iterates.
    #[arg(long)]
    degree_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = VimFunctional::Reduced)]
    vim_functional: VimFunctional,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_step: Option<f64>,
    /// Largest RK4 step.
    #[arg(long)]
    rk4_step: Option<f64>,
    /// Write to FILE instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Resolved {
    model: Model,
    eps: Vec<f64>,
    sigmas: Vec<f64>,
    grid: Vec<f64>,
    settings: Settings,
    methods: Vec<Method>,
    table: Option<BundledTable>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required without --table")))
}

impl Common {
    fn resolve(&self) -> Result<Resolved, CliError> {
        let table = match self.table {
            Some(id) => Some(
                BundledTable::get(id)
                    .ok_or_else(|| CliError::usage(format!("no bundled table {id}")))?,
            ),
            None => None,
        };
        let kind = match (self.model, &table) {
            (Some(m), Some(t)) if (m == ModelArg::Coupled) != t.model.is_coupled() => {
                return Err(CliError::usage("--model contradicts the chosen --table"))
            }
            (Some(m), _) => m,
            (None, Some(t)) if t.model.is_coupled() => ModelArg::Coupled,
            (None, Some(_)) => ModelArg::Delayed,
            (None, None) => return Err(CliError::usage("either --table or --model is required")),
        };
        let eps = if !self.eps.is_empty() {
            self.eps.clone()
        } else if let Some(t) = &table {
            t.eps.to_vec()
        } else {
            return Err(CliError::usage("--eps is required without --table"));
        };
        let model = match kind {
            ModelArg::Coupled => {
                if !self.sigma.is_empty() || self.alpha.is_some() || self.beta.is_some() {
                    return Err(CliError::usage(
                        "--alpha/--beta/--sigma apply to the delayed model",
                    ));
                }
                let base = table.as_ref().and_then(|t| match t.model {
                    Model::Coupled(p) => Some(p),
                    Model::Delayed(_) => None,
                });
                let pick = |flag: Option<f64>, from: fn(&CoupledParams) -> f64, name| {
                    flag.or(base.as_ref().map(from))
                        .map_or_else(|| need(None, name), Ok)
                };
                Model::Coupled(CoupledParams::new(
                    pick(self.c, |p| p.c, "c")?,
                    pick(self.eta, |p| p.eta, "eta")?,
                    pick(self.gamma, |p| p.gamma, "gamma")?,
                    pick(self.theta, |p| p.theta, "theta")?,
                    eps[0],
                )?)
            }
            ModelArg::Delayed => {
                if self.c.is_some()
                    || self.eta.is_some()
                    || self.gamma.is_some()
                    || self.theta.is_some()
                {
                    return Err(CliError::usage(
                        "--c/--eta/--gamma/--theta apply to the coupled model",
                    ));
                }
                let base = table.as_ref().and_then(|t| match t.model {
                    Model::Delayed(p) => Some(p),
                    Model::Coupled(_) => None,
                });
                let pick = |flag: Option<f64>, from: fn(&DelayedParams) -> f64, name| {
                    flag.or(base.as_ref().map(from))
                        .map_or_else(|| need(None, name), Ok)
                };
                Model::Delayed(DelayedParams::new(
                    pick(self.alpha, |p| p.alpha, "alpha")?,
                    pick(self.beta, |p| p.beta, "beta")?,
                    pick(self.sigma.first().copied(), |p| p.sigma, "sigma")?,
                    eps[0],
                )?)
            }
        };
        let (t_max, t_step) = match &table {
            Some(t) => (
                self.t_max.unwrap_or(t.t_max),
                self.t_step.unwrap_or(t.t_step),
            ),
            None => (self.t_max.unwrap_or(1.0), self.t_step.unwrap_or(0.1)),
        };
        let mut settings = Settings::with_order(
            self.order.unwrap_or(
                table
                    .as_ref()
                    .map_or(Settings::default().order, |t| t.order),
            ),
        );
        if let Some(n) = self.terms {
            settings.terms = n;
        }
        if let Some(n) = self.iters {
            settings.iters = n;
        }
        if let Some(n) = self.degree_cap {
            settings.degree_cap = n;
        }
        if let Some(h) = self.rk4_step {
            settings.rk4_step = h;
        }
        settings.vim_functional = self.vim_functional.into();
        let methods = match &table {
            Some(t) => t.methods.to_vec(),
            None if kind == ModelArg::Delayed => {
                vec![Method::Exact, Method::Dtm, Method::Adm, Method::Vim]
            }
            None => vec![Method::Dtm, Method::Adm, Method::Vim],
        };
        Ok(Resolved {
            model,
            eps,
            sigmas: self.sigma.clone(),
            grid: uniform_grid(t_max, t_step)?,
            settings,
            methods,
            table,
        })
    }
}

fn warn(r: &Resolved) -> Result<(), CliError> {
    for &e in &r.eps {
        if !(e > 0.0 && e < 1.0) {
            eprintln!("warning: eps = {e} lies outside (0, 1)");
        }
    }
    if let Model::Delayed(p) = r.model {
        let sigmas = if r.sigmas.is_empty() {
            vec![p.sigma]
        } else {
            r.sigmas.clone()
        };
        for s in sigmas {
            for &e in &r.eps {
                if !DelayedParams::new(p.alpha, p.beta, s, e)?.is_physical() {
                    eprintln!(
                        "warning: alpha={}, beta={}, sigma={s}, eps={e} is outside the physical range",
                        p.alpha, p.beta
                    );
                }
            }
        }
    }
    Ok(())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finish(failures: &[String]) -> Result<(), CliError> {
    if failures.is_empty() {
        return Ok(());
    }
    for f in failures {
        eprintln!("{f}");
    }
    Err(CliError::Numeric(format!(
        "{} cell(s) failed",
        failures.len()
    )))
}

fn pick_methods(given: &[Method], default: Vec<Method>) -> Vec<Method> {
    if given.is_empty() {
        default
    } else {
        given.to_vec()
    }
}

fn single_sigma(r: &Resolved) -> Result<(), CliError> {
    if r.sigmas.len() > 1 {
        return Err(CliError::usage(
            "several --sigma values are accepted only by `errors`",
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Command::Table { common, methods } => {
            let r = common.resolve()?;
            single_sigma(&r)?;
            warn(&r)?;
            let spec = TableSpec {
                model: r.model,
                grid: r.grid,
                eps: r.eps,
                methods: pick_methods(&methods, r.methods),
                settings: r.settings,
            };
            let out = cmd_table(&spec)?;
            emit(&out.csv, common.out.as_ref())?;
            finish(&out.failures)
        }
        Command::Errors {
            common,
            methods,
            oracle,
        } => {
            let r = common.resolve()?;
            warn(&r)?;
            let oracle = match (oracle, r.model.is_coupled()) {
                (Some(OracleArg::Exact), _) => Method::Exact,
                (Some(OracleArg::Rk4), _) | (None, true) => Method::Rk4,
                (None, false) => Method::Exact,
            };
            let spec = TableSpec {
                model: r.model,
                grid: r.grid,
                eps: r.eps,
                methods: pick_methods(&methods, vec![Method::Dtm, Method::Adm, Method::Vim]),
                settings: r.settings,
            };
            let report = cmd_errors(&spec, oracle, &r.sigmas)?;
            emit(&report.to_csv()?, common.out.as_ref())?;
            finish(&report.failures())
        }
        Command::Sweep {
            common,
            method,
            from,
            to,
            target,
            column,
        } => {
            let r = common.resolve()?;
            single_sigma(&r)?;
            warn(&r)?;
            if r.eps.len() != 1 && column.is_none() {
                return Err(CliError::usage(
                    "sweep takes a single --eps (or an explicit --column)",
                ));
            }
            if from > to {
                return Err(CliError::usage("--from must not exceed --to"));
            }
            let table = match (&target, &r.table) {
                (Some(path), _) => TargetTable::load(path)?,
                (None, Some(t)) => t.target(),
                (None, None) => return Err(CliError::usage("sweep needs --target or --table")),
            };
            let name = column.unwrap_or_else(|| enso_cli::spec::column_name(method, r.eps[0]));
            let values = table
                .column(&name)
                .ok_or_else(|| CliError::usage(format!("target has no column `{name}`")))?;
            let report = cmd_sweep(&r.model, &table.ts, values, method, from..=to, &r.settings)?;
            emit(&report.to_csv()?, common.out.as_ref())?;
            match report.best() {
                Some(_) => Ok(()),
                None => Err(CliError::Numeric("every level failed".into())),
            }
        }
        Command::Trajectory { common, methods } => {
            let r = common.resolve()?;
            single_sigma(&r)?;
            warn(&r)?;
            if r.eps.len() != 1 {
                return Err(CliError::usage("trajectory takes a single --eps"));
            }
            let default = if r.model.is_coupled() {
                vec![Method::Dtm, Method::Rk4]
            } else {
                vec![Method::Exact, Method::Dtm]
            };
            let out = cmd_trajectory(
                &r.model,
                &r.grid,
                &pick_methods(&methods, default),
                &r.settings,
            )?;
            emit(&out.csv, common.out.as_ref())?;
            finish(&out.failures)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("enso: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
