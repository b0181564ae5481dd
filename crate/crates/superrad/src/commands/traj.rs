//! Quantum-trajectory ensembles with the optimal-generator QFI tracked along each run.

use std::path::Path;

use superrad_core::liouvillian::ModelParams;
use superrad_core::mcwf::{default_t_final, run_trajectory, McwfOptions, TrajectoryModel};
use superrad_core::qfi::{qfi_sample, AccelerationFrame, GeneratorBasis, QfiSample};
use superrad_core::C64;

use super::{write_run, Output};
use crate::config::{RunConfig, TrajConfig, BLOCK_GUARD};
use crate::error::Result;
use crate::manifest::{unix_now, RunManifest};
use crate::parallel::map_ordered;
use crate::table::{schema, Cell, ResultTable};

/// Operators shared by all trajectories of one `(N, W/Γc)` point.
struct Point {
    params: ModelParams,
    model: TrajectoryModel,
    generators: GeneratorBasis,
    frame: AccelerationFrame,
    t_final: f64,
    times: Vec<f64>,
}

fn point(params: ModelParams, cfg: &TrajConfig) -> superrad_core::Result<Point> {
    let model = TrajectoryModel::new(&params)?;
    let generators = GeneratorBasis::new(model.basis().clone())?;
    let frame = AccelerationFrame::new(model.basis().clone())?;
    let t_final = match cfg.t_final {
        Some(t) => t,
        None => default_t_final(&params)?,
    };
    let end = cfg.horizon * t_final;
    let last = (cfg.samples - 1) as f64;
    let times = (0..cfg.samples).map(|k| end * k as f64 / last).collect();
    Ok(Point {
        params,
        model,
        generators,
        frame,
        t_final,
        times,
    })
}

/// One finished trajectory.
pub struct TrajectoryRun {
    pub samples: Vec<QfiSample>,
    pub jumps: Vec<superrad_core::mcwf::Jump>,
}

fn trajectory(p: &Point, seed: u64, index: u64) -> superrad_core::Result<TrajectoryRun> {
    let mut samples = Vec::with_capacity(p.times.len());
    let state = run_trajectory(&p.model, seed, index, &p.times, &McwfOptions::default(), |_, t, psi| {
        let psi: Vec<C64> = psi.iter().map(|&v| C64::new(v, 0.0)).collect();
        samples.push(qfi_sample(&p.generators, &p.frame, t, &psi)?);
        Ok(())
    })?;
    Ok(TrajectoryRun {
        samples,
        jumps: state.jump_log,
    })
}

/// Minimum of `λ_max/N²` and the fraction above `threshold` over samples with `t ≥ t_final`.
pub fn post_transient(samples: &[QfiSample], n: usize, t_final: f64, threshold: f64) -> (Option<f64>, Option<f64>) {
    let n2 = (n * n) as f64;
    let post: Vec<f64> = samples
        .iter()
        .filter(|s| s.time >= t_final * (1.0 - 1e-12))
        .map(|s| s.lambda_max / n2)
        .collect();
    if post.is_empty() {
        return (None, None);
    }
    let min = post.iter().copied().fold(f64::INFINITY, f64::min);
    let above = post.iter().filter(|&&v| v > threshold).count() as f64 / post.len() as f64;
    (Some(min), Some(above))
}

pub fn tables(cfg: &RunConfig) -> Result<Vec<Output>> {
    cfg.validate()?;
    cfg.check_guard(BLOCK_GUARD, "trajectory")?;
    let mut params = Vec::new();
    for &n in &cfg.n {
        for r in cfg.ratio_grid.points() {
            params.push(ModelParams::from_ratio(n, r)?);
        }
    }
    let points = map_ordered(cfg.workers, &params, |p| point(*p, &cfg.traj))?
        .into_iter()
        .collect::<superrad_core::Result<Vec<_>>>()?;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|i| (0..cfg.traj.n_traj as u64).map(move |k| (i, k)))
        .collect();
    let runs = map_ordered(cfg.workers, &jobs, |&(i, k)| trajectory(&points[i], cfg.seed, k))?
        .into_iter()
        .collect::<superrad_core::Result<Vec<_>>>()?;

    let mut qfi = ResultTable::new("traj_qfi", schema::traj_qfi());
    let mut jumps = ResultTable::new("traj_jumps", schema::traj_jumps());
    let mut summary = ResultTable::new("traj_summary", schema::traj_summary());
    for (&(i, k), run) in jobs.iter().zip(&runs) {
        let p = &points[i];
        let n = p.params.n_atoms();
        let head = || vec![Cell::from(n), p.params.ratio().into(), k.into()];
        for s in &run.samples {
            let mut row = head();
            row.extend([s.time, s.lambda_max, s.f_accel, s.gap(), n as f64].map(Cell::from));
            row.extend(s.v_max.iter().map(|&c| Cell::from(c)));
            qfi.push(row)?;
        }
        for j in &run.jumps {
            let mut row = head();
            row.extend([j.time.into(), j.channel.label().into(), j.crossing_error.into()]);
            jumps.push(row)?;
        }
        let (min, above) = post_transient(&run.samples, n, p.t_final, cfg.traj.entanglement_threshold);
        let mut row = head();
        row.extend([
            p.t_final.into(),
            run.jumps.len().into(),
            min.into(),
            above.into(),
            run.samples.first().map(|s| s.lambda_max).into(),
        ]);
        summary.push(row)?;
    }
    Ok(vec![
        Output::new("traj_qfi.csv", qfi),
        Output::new("traj_jumps.csv", jumps),
        Output::new("traj_summary.csv", summary),
    ])
}

pub fn run(cfg: &RunConfig, dir: &Path) -> Result<RunManifest> {
    let started = unix_now();
    write_run("traj", cfg, started, &tables(cfg)?, dir)
}
