//! Large-`N` extrapolation `y/N² = X + Y/N + Z/N²` of steady-state observables.

use std::path::Path;

use superrad_core::observables::thermo_fit;

use super::{status, write_run, Output};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::manifest::{unix_now, RunManifest};
use crate::table::{schema, Cell, ResultTable};

/// Steady-state columns that are extrapolated.
pub const OBSERVABLES: [&str; 4] = ["ix", "iz", "j2", "e2"];

/// Fit every observable of [`OBSERVABLES`] per ratio over the rows with status `ok`.
pub fn fit_steady_table(steady: &ResultTable) -> Result<ResultTable> {
    let n = steady.numbers("n_atoms")?;
    let ratio = steady.numbers("ratio")?;
    let st = steady
        .column_index("status")
        .ok_or_else(|| Error::Schema {
            schema: steady.schema.clone(),
            detail: "no status column".into(),
        })?;
    let columns = OBSERVABLES
        .iter()
        .map(|o| steady.numbers(o))
        .collect::<Result<Vec<_>>>()?;

    let mut ratios: Vec<f64> = Vec::new();
    for r in ratio.iter().flatten() {
        if !ratios.contains(r) {
            ratios.push(*r);
        }
    }
    let mut out = ResultTable::new("fit", schema::fit());
    for &r in &ratios {
        for (o, col) in OBSERVABLES.iter().zip(&columns) {
            let values: Vec<(usize, f64)> = (0..steady.rows.len())
                .filter(|&i| ratio[i] == Some(r) && steady.rows[i][st] == Cell::Text("ok".into()))
                .filter_map(|i| match (n[i], col[i]) {
                    (Some(n), Some(y)) if n >= 1.0 => {
                        let n = n as usize;
                        Some((n, y / (n * n) as f64))
                    }
                    _ => None,
                })
                .collect();
            let res = thermo_fit(&values);
            let row = match &res {
                Ok(f) => {
                    let ns: Vec<String> = f.n_values.iter().map(usize::to_string).collect();
                    vec![
                        r.into(),
                        (*o).into(),
                        f.x.into(),
                        f.y.into(),
                        f.z.into(),
                        f.residual.into(),
                        ns.join(" ").into(),
                        status(&res).into(),
                    ]
                }
                Err(_) => vec![
                    r.into(),
                    (*o).into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    status(&res).into(),
                ],
            };
            out.push(row)?;
        }
    }
    Ok(out)
}

/// Refit a previously written `steady.csv`.
pub fn tables(input: &Path) -> Result<Vec<Output>> {
    let steady = ResultTable::read(input, "steady", Some(&schema::steady()))?;
    Ok(vec![Output::new("fit.csv", fit_steady_table(&steady)?)])
}

pub fn run(cfg: &RunConfig, input: &Path, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("fit", cfg, started, &tables(input)?, dir)
}
