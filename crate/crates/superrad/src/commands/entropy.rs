//! Coherent information between the spin and momentum subsystems of steady states.

use std::path::Path;
use std::sync::Arc;

use superrad_core::basis::{Flavor, SymmetricBasis};
use superrad_core::entropy::{EntropyReport, LayerDecomposition};
use superrad_core::liouvillian::{steady_state_full, BlockModel, DensityMatrix, ModelParams};
use superrad_core::qfi::product_state;
use superrad_core::C64;

use super::{write_run, Output};
use crate::config::{RunConfig, FULL_BASIS_GUARD};
use crate::error::Result;
use crate::manifest::{unix_now, RunManifest};
use crate::parallel::map_ordered;
use crate::table::{schema, Cell, ResultTable};

struct Setup {
    model: BlockModel,
    layers: LayerDecomposition,
}

fn setup(n: usize) -> superrad_core::Result<Setup> {
    let basis = Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr)?);
    Ok(Setup {
        model: BlockModel::new(n)?,
        layers: LayerDecomposition::new(basis)?,
    })
}

/// `|g,l>^⊗N`, the initial state of every run.
fn product_report(s: &Setup) -> superrad_core::Result<EntropyReport> {
    let basis = s.layers.basis().clone();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let psi = product_state(&basis, [one, zero, zero, zero]);
    s.layers.coherent_information(&DensityMatrix::pure(basis, &psi)?)
}

fn steady_report(s: &Setup, params: &ModelParams) -> superrad_core::Result<(EntropyReport, usize)> {
    let full = steady_state_full(&s.model, params)?;
    Ok((s.layers.coherent_information(&full.rho_lr)?, full.persistent_coherences))
}

fn row(state: &str, n: usize, ratio: Option<f64>, report: &std::result::Result<EntropyReport, String>, note: &str) -> Vec<Cell> {
    let mut row = vec![state.into(), n.into(), ratio.into()];
    match report {
        Ok(r) => {
            row.extend([r.s_full, r.s_j, r.s_k, r.i_j_k(), r.i_k_j()].map(Cell::from));
            row.push((n as f64 * std::f64::consts::LN_2).into());
            row.push(note.into());
        }
        Err(e) => {
            row.extend(vec![Cell::Empty; 5]);
            row.push((n as f64 * std::f64::consts::LN_2).into());
            row.push(e.clone().into());
        }
    }
    row
}

pub fn tables(cfg: &RunConfig) -> Result<Vec<Output>> {
    cfg.validate()?;
    cfg.check_guard(FULL_BASIS_GUARD, "full-basis")?;
    let ratios = cfg.ratio_grid.points();
    let setups = map_ordered(cfg.workers, &cfg.n, |&n| setup(n))?
        .into_iter()
        .collect::<superrad_core::Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for (i, &n) in cfg.n.iter().enumerate() {
        jobs.push((i, None));
        for &r in &ratios {
            jobs.push((i, Some(ModelParams::from_ratio(n, r)?)));
        }
    }
    let rows = map_ordered(cfg.workers, &jobs, |(i, params)| {
        let s = &setups[*i];
        let n = cfg.n[*i];
        match params {
            None => row("product", n, None, &product_report(s).map_err(|e| e.to_string()), "ok"),
            Some(p) => {
                let res = steady_report(s, p).map_err(|e| e.to_string());
                let note = match &res {
                    Ok((_, 0)) => "ok".to_string(),
                    Ok((_, k)) => format!("{k} persistent coherences"),
                    Err(_) => String::new(),
                };
                row("steady", n, Some(p.ratio()), &res.map(|(r, _)| r), &note)
            }
        }
    })?;
    let mut t = ResultTable::new("entropy", schema::entropy());
    for r in rows {
        t.push(r)?;
    }
    Ok(vec![Output::new("entropy.csv", t)])
}

pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("entropy", cfg, started, &tables(cfg)?, dir)
}
