//! Target tables: plain CSV files with a `t` column followed by one column per
//! `(method, ε)`, and the four bundled reference tables.

use std::path::Path;

use enso_core::{CoupledParams, DelayedParams, Model};

use crate::spec::{column_name, uniform_grid, Method, Settings, TableSpec};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetTable {
    pub ts: Vec<f64>,
    /// `(header, values)` in file order, excluding `t`.
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TargetTable {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = rdr.headers()?.clone();
        if header.get(0) != Some("t") {
            return Err(CliError::usage("target table must start with a `t` column"));
        }
        let mut ts = Vec::new();
        let mut columns: Vec<(String, Vec<f64>)> = header
            .iter()
            .skip(1)
            .map(|h| (h.to_string(), Vec::new()))
            .collect();
        for rec in rdr.records() {
            let rec = rec?;
            let mut cells = rec.iter().map(|c| {
                c.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::usage(format!("bad number `{c}` in target table")))
            });
            ts.push(cells.next().transpose()?.unwrap_or(f64::NAN));
            for (col, cell) in columns.iter_mut().zip(cells) {
                col.1.push(cell?);
            }
        }
        Ok(Self { ts, columns })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(h, _)| h == name)
            .map(|(_, v)| v.as_slice())
    }

    /// The column of `method` at `eps`, matched by header.
    pub fn column_for(&self, method: Method, eps: f64) -> Option<&[f64]> {
        self.column(&column_name(method, eps))
    }
}

/// A bundled comparison table and the parameters it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct BundledTable {
    pub id: u8,
    /// Documented parameters with `ε` set to the first listed value.
    pub model: Model,
    pub eps: &'static [f64],
    pub t_max: f64,
    pub t_step: f64,
    pub methods: &'static [Method],
    /// Suggested DTM order for converged values.
    pub order: usize,
    data: &'static str,
}

const COUPLED_METHODS: &[Method] = &[Method::Dtm, Method::Adm, Method::Vim];
const DELAYED_METHODS: &[Method] = &[Method::Exact, Method::Dtm, Method::Adm, Method::Vim];

impl BundledTable {
    pub fn get(id: u8) -> Option<Self> {
        let coupled =
            |c: f64| Model::Coupled(CoupledParams::new(c, 1.0, 1.0, 1.0, 0.1).expect("finite"));
        let delayed = |alpha, beta, sigma| {
            Model::Delayed(DelayedParams::new(alpha, beta, sigma, 0.05).expect("finite"))
        };
        Some(match id {
            1 => Self {
                id,
                model: coupled(1.0),
                eps: &[0.1, 0.2],
                t_max: 1.0,
                t_step: 0.2,
                methods: COUPLED_METHODS,
                order: 25,
                data: include_str!("../data/table1.csv"),
            },
            2 => Self {
                id,
                model: coupled(2.0),
                eps: &[0.1, 0.2],
                t_max: 1.0,
                t_step: 0.2,
                methods: COUPLED_METHODS,
                order: 25,
                data: include_str!("../data/table2.csv"),
            },
            3 => Self {
                id,
                model: delayed(0.5, 0.3, 0.25),
                eps: &[0.05, 0.1],
                t_max: 2.0,
                t_step: 0.4,
                methods: DELAYED_METHODS,
                order: 25,
                data: include_str!("../data/table3.csv"),
            },
            4 => Self {
                id,
                model: delayed(1.0, 0.5, 0.5),
                eps: &[0.05, 0.1],
                t_max: 2.0,
                t_step: 0.4,
                methods: DELAYED_METHODS,
                order: 40,
                data: include_str!("../data/table4.csv"),
            },
            _ => return None,
        })
    }

    pub fn target(&self) -> TargetTable {
        TargetTable::parse(self.data).expect("bundled table is well formed")
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.t_step).expect("bundled grid is valid")
    }

    /// A table spec reproducing this table with the given settings.
    pub fn spec(&self, settings: Settings) -> TableSpec {
        TableSpec {
            model: self.model,
            grid: self.grid(),
            eps: self.eps.to_vec(),
            methods: self.methods.to_vec(),
            settings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_parse() {
        for id in 1..=4 {
            let t = BundledTable::get(id).unwrap();
            let target = t.target();
            let grid = t.grid();
            assert_eq!(target.ts.len(), grid.len());
            for (a, b) in target.ts.iter().zip(&grid) {
                assert!((a - b).abs() < 1e-12);
            }
            for &m in t.methods {
                for &e in t.eps {
                    let col = target.column_for(m, e).unwrap();
                    assert_eq!(col.len(), grid.len());
                    assert_eq!(col[0], 1.0);
                }
            }
        }
        assert!(BundledTable::get(5).is_none());
    }

    #[test]
    fn table_entries() {
        let t1 = BundledTable::get(1).unwrap().target();
        assert_eq!(t1.column_for(Method::Dtm, 0.1).unwrap()[1], 1.363075110);
        let t3 = BundledTable::get(3).unwrap().target();
        assert_eq!(t3.column_for(Method::Exact, 0.05).unwrap()[5], 1.329402528);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(TargetTable::parse("x,DTM\n0,1\n").is_err());
        assert!(TargetTable::parse("t,DTM\n0,abc\n").is_err());
        assert!(TargetTable::parse("t,DTM\n0,1,2\n").is_err());
    }
}
