//! Run configuration: a TOML file whose keys mirror the command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use superrad_core::liouvillian::PhysicalParams;

use crate::error::{Error, Result};
use crate::manifest::RunManifest;

/// Largest atom count accepted on full-basis paths without override.
pub const FULL_BASIS_GUARD: usize = 12;
/// Largest atom count accepted on block and trajectory paths without override.
pub const BLOCK_GUARD: usize = 64;

/// `count` log-spaced values of `W/Γc` from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for RatioGrid {
    fn default() -> Self {
        Self {
            min: 0.01,
            max: 100.0,
            count: 41,
        }
    }
}

impl RatioGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite()) {
            return Err(Error::Config(format!(
                "ratio grid needs 0 < min <= max, got {}..{}",
                self.min, self.max
            )));
        }
        if self.count == 0 {
            return Err(Error::Config("ratio grid needs at least one point".into()));
        }
        Ok(())
    }

    /// Grid values; exponents are mirrored exactly when `min·max = 1`.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let (lo, hi) = (self.min.log10(), self.max.log10());
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let e = (lo * (last - k as f64) + hi * k as f64) / last;
                10f64.powf(e)
            })
            .collect()
    }

    /// Parse `min,max,count`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || Error::Config(format!("ratio grid `{text}` is not `min,max,count`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let grid = Self {
            min: parts[0].parse().map_err(|_| bad())?,
            max: parts[1].parse().map_err(|_| bad())?,
            count: parts[2].parse().map_err(|_| bad())?,
        };
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SteadyConfig {
    /// Prove absence of stationary coherences inside every sector.
    pub verify_coherences: bool,
}

impl Default for SteadyConfig {
    fn default() -> Self {
        Self {
            verify_coherences: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct G2Config {
    /// Detector bandwidth `B` in units of `Γc`.
    pub bandwidth: f64,
}

impl Default for G2Config {
    fn default() -> Self {
        Self { bandwidth: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajConfig {
    pub n_traj: usize,
    /// Uniform QFI samples over `[0, horizon · t_final]`.
    pub samples: usize,
    /// Transient length in `1/Γc`; defaults to `20/(NΓc) · max(1, Γc/W)`.
    pub t_final: Option<f64>,
    /// Run length as a multiple of `t_final`; samples past `t_final` are post-transient.
    pub horizon: f64,
    /// `λ_max/N²` threshold whose post-transient fraction is reported.
    pub entanglement_threshold: f64,
}

impl Default for TrajConfig {
    fn default() -> Self {
        Self {
            n_traj: 50,
            samples: 200,
            t_final: None,
            horizon: 2.0,
            entanglement_threshold: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalConfig {
    pub g_x: f64,
    pub g_z: f64,
    pub omega: f64,
    pub delta_a: f64,
    pub kappa_x: f64,
    pub kappa_z: f64,
    /// Largest `NW/κz` and `NΓc/κx` counted as bad-cavity.
    pub validity_threshold: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            g_x: 1.0,
            g_z: 1.0,
            omega: 1.0,
            delta_a: 10.0,
            kappa_x: 100.0,
            kappa_z: 100.0,
            validity_threshold: 0.1,
        }
    }
}

impl PhysicalConfig {
    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            g_x: self.g_x,
            g_z: self.g_z,
            omega: self.omega,
            delta_a: self.delta_a,
            kappa_x: self.kappa_x,
            kappa_z: self.kappa_z,
        }
    }
}

/// Full parameter set of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: Vec<usize>,
    pub ratio_grid: RatioGrid,
    pub seed: u64,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    pub override_guards: bool,
    /// Free-flight time of the acceleration measurement, recorded only.
    pub encoding_tau: Option<f64>,
    pub steady: SteadyConfig,
    pub g2: G2Config,
    pub traj: TrajConfig,
    pub physical: PhysicalConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: vec![4, 8],
            ratio_grid: RatioGrid::default(),
            seed: 0,
            workers: None,
            override_guards: false,
            encoding_tau: None,
            steady: SteadyConfig::default(),
            g2: G2Config::default(),
            traj: TrajConfig::default(),
            physical: PhysicalConfig::default(),
        }
    }
}

impl RunConfig {
    /// Read a TOML config, or the config stored in a JSON run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str::<RunManifest>(&text)?.config
        } else {
            toml::from_str(&text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::Config("atom counts must be a non-empty list of positive integers".into()));
        }
        self.ratio_grid.validate()?;
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        if !(self.g2.bandwidth > 0.0) {
            return Err(Error::Config("detector bandwidth must be positive".into()));
        }
        let t = &self.traj;
        if t.n_traj == 0 || t.samples < 2 {
            return Err(Error::Config("trajectories need n_traj >= 1 and samples >= 2".into()));
        }
        if !(t.horizon >= 1.0) || t.t_final.is_some_and(|v| !(v > 0.0)) {
            return Err(Error::Config("trajectory horizon must be >= 1 and t_final positive".into()));
        }
        Ok(())
    }

    /// Fail when any requested `N` exceeds `limit` and guards are active.
    pub fn check_guard(&self, limit: usize, path: &'static str) -> Result<()> {
        if self.override_guards {
            return Ok(());
        }
        match self.n.iter().find(|&&n| n > limit) {
            Some(&n) => Err(Error::Guard { n, limit, path }),
            None => Ok(()),
        }
    }
}

/// Parse a comma-separated atom-count list.
pub fn parse_n_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("`{s}` is not an atom count")))
        })
        .collect()
}
