//! Steady-state sweep over atom counts and pump ratios.

use std::collections::BTreeSet;
use std::path::Path;

use superrad_core::liouvillian::{steady_state_blocks, BlockModel, ModelParams, SteadyStateOptions};
use superrad_core::observables::{block_moments, flux_residual, intensities, Moments};

use super::{fit, status, write_run, Output};
use crate::config::{RunConfig, BLOCK_GUARD};
use crate::error::Result;
use crate::manifest::{unix_now, RunManifest};
use crate::parallel::map_ordered;
use crate::table::{schema, Cell, ResultTable};

/// Steady-state moments of one `(N, W/Γc)` point, or the solver error.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub params: ModelParams,
    pub moments: std::result::Result<Moments, String>,
}

/// Solve every `(N, ratio)` pair of the configuration, ordered by `N` then ratio.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    cfg.check_guard(BLOCK_GUARD, "block")?;
    let ratios = cfg.ratio_grid.points();
    let models = map_ordered(cfg.workers, &cfg.n, |&n| BlockModel::new(n))?
        .into_iter()
        .collect::<superrad_core::Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (i, &n) in cfg.n.iter().enumerate() {
        for &r in &ratios {
            jobs.push((i, ModelParams::from_ratio(n, r)?));
        }
    }
    let options = SteadyStateOptions {
        verify_coherences: cfg.steady.verify_coherences,
    };
    map_ordered(cfg.workers, &jobs, |(i, params)| {
        let moments = steady_state_blocks(&models[*i], params, options)
            .and_then(|bd| block_moments(&models[*i], &bd))
            .map_err(|e| e.to_string());
        SweepPoint {
            params: *params,
            moments,
        }
    })
}

fn steady_row(p: &SweepPoint) -> Vec<Cell> {
    let head = [Cell::from(p.params.n_atoms()), Cell::from(p.params.ratio())];
    let tail = match &p.moments {
        Ok(m) => vec![
            m.ee.into(),
            m.jj.into(),
            m.jz().into(),
            m.j_casimir().into(),
            m.e_casimir().into(),
            flux_residual(m, &p.params).into(),
            status(&intensities(m, &p.params)).into(),
        ],
        Err(e) => {
            let mut row = vec![Cell::Empty; 6];
            row.push(e.clone().into());
            row
        }
    };
    head.into_iter().chain(tail).collect()
}

/// `steady.csv`, plus `steady_fit.csv` when at least three distinct `N` were run.
pub fn tables(cfg: &RunConfig) -> Result<Vec<Output>> {
    let points = sweep(cfg)?;
    let mut steady = ResultTable::new("steady", schema::steady());
    for p in &points {
        steady.push(steady_row(p))?;
    }
    let distinct: BTreeSet<usize> = cfg.n.iter().copied().collect();
    let fit = if distinct.len() >= 3 {
        Some(fit::fit_steady_table(&steady)?)
    } else {
        None
    };
    let mut outputs = vec![Output::new("steady.csv", steady)];
    outputs.extend(fit.map(|t| Output::new("steady_fit.csv", t)));
    Ok(outputs)
}

pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("steady", cfg, started, &tables(cfg)?, dir)
}
