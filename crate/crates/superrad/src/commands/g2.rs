//! Zero-delay photon statistics of both cavities along the steady-state sweep.

use std::path::Path;

use superrad_core::observables::{g2_zero, intensity_fluctuations, thermal_g2};

use super::steady::{sweep, SweepPoint};
use super::{status, write_run, Output};
use crate::config::RunConfig;
use crate::error::Result;
use crate::manifest::{unix_now, RunManifest};
use crate::table::{schema, Cell, ResultTable};

fn g2_row(p: &SweepPoint, bandwidth: f64) -> Vec<Cell> {
    let n = p.params.n_atoms();
    let mut row = vec![Cell::from(n), p.params.ratio().into()];
    let m = match &p.moments {
        Ok(m) => m,
        Err(e) => {
            row.extend([Cell::Empty, Cell::Empty, thermal_g2(n).into()]);
            row.extend(vec![Cell::Empty; 4]);
            row.push(e.clone().into());
            return row;
        }
    };
    let g2 = g2_zero(m);
    let (g2x, g2z) = match &g2 {
        Ok((x, z)) => (Some(*x), Some(*z)),
        Err(_) => (None, None),
    };
    let var = |i: f64, g: Option<f64>| g.and_then(|g| intensity_fluctuations(i, g, bandwidth).ok());
    row.extend([
        g2x.into(),
        g2z.into(),
        thermal_g2(n).into(),
        m.ee.into(),
        m.jj.into(),
        var(m.ee, g2x).into(),
        var(m.jj, g2z).into(),
        status(&g2).into(),
    ]);
    row
}

pub fn tables(cfg: &RunConfig) -> Result<Vec<Output>> {
    let mut t = ResultTable::new("g2", schema::g2());
    for p in &sweep(cfg)? {
        t.push(g2_row(p, cfg.g2.bandwidth))?;
    }
    Ok(vec![Output::new("g2.csv", t)])
}

pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("g2", cfg, started, &tables(cfg)?, dir)
}
