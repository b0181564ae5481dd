//! Effective pump and decay rates from cavity parameters, with bad-cavity checks.

use std::path::Path;

use superrad_core::liouvillian::effective_rates;

use super::{write_run, Output};
use crate::config::RunConfig;
use crate::error::Result;
use crate::manifest::{unix_now, RunManifest};
use crate::table::{schema, ResultTable};

pub fn tables(cfg: &RunConfig) -> Result<Vec<Output>> {
    cfg.validate()?;
    let phys = &cfg.physical;
    let rates = effective_rates(&phys.params())?;
    let ratio = (rates.decay > 0.0).then(|| rates.pump / rates.decay);
    let mut t = ResultTable::new("rates", schema::rates());
    for &n in &cfg.n {
        let pump_load = n as f64 * rates.pump / phys.kappa_z;
        let decay_load = n as f64 * rates.decay / phys.kappa_x;
        t.push(vec![
            n.into(),
            rates.pump.into(),
            rates.decay.into(),
            ratio.into(),
            pump_load.into(),
            decay_load.into(),
            (pump_load <= phys.validity_threshold).into(),
            (decay_load <= phys.validity_threshold).into(),
        ])?;
    }
    Ok(vec![Output::new("rates.csv", t)])
}

pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("rates", cfg, started, &tables(cfg)?, dir)
}
