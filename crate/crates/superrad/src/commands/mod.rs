//! One module per subcommand. Each exposes a pure `tables` function and a
//! `run` wrapper that writes the tables and the run manifest.

pub mod entropy;
pub mod fit;
pub mod g2;
pub mod rates;
pub mod steady;
pub mod traj;

use std::path::Path;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::manifest::{unix_now, OutputFile, RunManifest};
use crate::table::ResultTable;

/// A table together with its file name inside the output directory.
#[derive(Debug, Clone)]
pub struct Output {
    pub file: String,
    pub table: ResultTable,
}

impl Output {
    pub fn new(file: impl Into<String>, table: ResultTable) -> Self {
        Self {
            file: file.into(),
            table,
        }
    }
}

/// Write every output under `dir` followed by the manifest of the run.
pub fn write_run(command: &str, cfg: &RunConfig, started: f64, outputs: &[Output], dir: &Path) -> Result<RunManifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = RunManifest::new(command, cfg, started);
    for out in outputs {
        let sha256 = out.table.write(&dir.join(&out.file))?;
        manifest.outputs.push(OutputFile {
            path: out.file.clone(),
            schema: out.table.schema.clone(),
            rows: out.table.rows.len(),
            sha256,
        });
    }
    manifest.finished = unix_now();
    manifest.write(dir)?;
    Ok(manifest)
}

/// `"ok"` or the error text of a failed computation.
pub(crate) fn status<T, E: std::fmt::Display>(r: &std::result::Result<T, E>) -> String {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.to_string(),
    }
}
