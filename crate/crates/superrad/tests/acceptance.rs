//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! A FAIL line is a reported result, not a harness error; the process exits
//! non-zero only when a check cannot be evaluated at all.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;

use superrad::commands::{entropy, steady, traj};
use superrad::config::{RatioGrid, RunConfig};
use superrad::table::{Cell, ResultTable};
use superrad_core::basis::{Flavor, SymmetricBasis};
use superrad_core::entropy::{multiplicity, LayerDecomposition, Subsystem};
use superrad_core::liouvillian::{
    evolve, initial_state, steady_state_blocks, BlockModel, DensityMatrix, EvolveOptions, InitialState, ModelParams,
    Representation, SteadyStateOptions,
};
use superrad_core::mcwf::{default_t_final, run_ensemble, trajectory_rng, uniform, McwfOptions, TrajectoryModel};
use superrad_core::observables::{block_moments, g2_zero, thermo_fit, Moments};
use superrad_core::operators::{build_ladder, hermitian_components, Ladder};
use superrad_core::qfi::{product_state, AccelerationFrame, GeneratorBasis};
use superrad_core::C64;

type Check = Result<(bool, String), String>;

struct Report {
    failed: usize,
    errors: usize,
    /// Substring filter from `SUPERRAD_ACCEPT_ONLY`.
    only: Option<String>,
}

impl Report {
    fn run(&mut self, name: &str, check: impl FnOnce() -> Check) {
        if self.only.as_ref().is_some_and(|f| !name.contains(f.as_str())) {
            return;
        }
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok((true, detail)) => println!("PASS  {name}: {detail} [{secs:.1} s]"),
            Ok((false, detail)) => {
                self.failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1} s]");
            }
            Err(e) => {
                self.errors += 1;
                println!("ERROR {name}: {e} [{secs:.1} s]");
            }
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cfg(n: &[usize], min: f64, max: f64, count: usize) -> RunConfig {
    RunConfig {
        n: n.to_vec(),
        ratio_grid: RatioGrid { min, max, count },
        ..RunConfig::default()
    }
}

fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

// ---------------------------------------------------------------------------
// Dense first-quantized reference on the full 4^N space.

const G_L: usize = 0;
const G_R: usize = 1;
const E_L: usize = 2;
const E_R: usize = 3;

/// Collective sum of the single-atom map `|dst><src|` over every atom.
fn collective(n: usize, single: &[(usize, usize)]) -> DMatrix<f64> {
    let d = 4usize.pow(n as u32);
    let mut m = DMatrix::zeros(d, d);
    for idx in 0..d {
        for atom in 0..n {
            let place = 4usize.pow(atom as u32);
            let mode = idx / place % 4;
            for &(dst, src) in single {
                if mode == src {
                    m[(idx + dst * place - src * place, idx)] += 1.0;
                }
            }
        }
    }
    m
}

struct FirstQuantized {
    j_plus: DMatrix<f64>,
    e_plus: DMatrix<f64>,
    j_z: DMatrix<f64>,
}

impl FirstQuantized {
    fn new(n: usize) -> Self {
        let j_plus = collective(n, &[(E_L, G_L), (E_R, G_R)]);
        let e_plus = collective(n, &[(E_R, G_L), (E_L, G_R)]);
        let up = collective(n, &[(E_L, E_L), (E_R, E_R)]);
        let down = collective(n, &[(G_L, G_L), (G_R, G_R)]);
        Self {
            j_plus,
            e_plus,
            j_z: (up - down) * 0.5,
        }
    }

    /// Long-time limit of `dρ/dt = W D[J+]ρ + Γ D[E-]ρ` from `|g,l>^N`,
    /// by backward-Euler steps on the real symmetric part of Liouville space.
    fn steady_state(&self, pump: f64, decay: f64) -> Result<DMatrix<f64>, String> {
        let d = self.j_plus.nrows();
        let jumps = [(pump, self.j_plus.clone()), (decay, self.e_plus.transpose())];
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).collect();
        let pos = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            a * d - a * (a + 1) / 2 + b
        };
        let apply = |x: &DMatrix<f64>| {
            let mut out = DMatrix::zeros(d, d);
            for (rate, a) in &jumps {
                let loss = a.transpose() * a;
                out += (a * x * a.transpose() - (&loss * x + x * &loss) * 0.5) * *rate;
            }
            out
        };
        let m = pairs.len();
        let mut gen = DMatrix::<f64>::zeros(m, m);
        for (col, &(a, b)) in pairs.iter().enumerate() {
            let mut x = DMatrix::zeros(d, d);
            x[(a, b)] = 1.0;
            x[(b, a)] = 1.0;
            let lx = apply(&x);
            for (row, &(c, e)) in pairs.iter().enumerate() {
                gen[(row, col)] = lx[(c, e)];
            }
        }
        let h = 100.0 / pump.min(decay);
        let step = (DMatrix::identity(m, m) - gen * h).lu();
        let mut x = nalgebra::DVector::zeros(m);
        x[pos(0, 0)] = 1.0;
        for _ in 0..500 {
            let next = step.solve(&x).ok_or("singular backward-Euler matrix")?;
            let change = (&next - &x).amax();
            x = next;
            // contraction is ~1/(1 + h·rate) per step; rounding floor is ~1e-13
            if change < 1e-11 {
                let mut rho = DMatrix::zeros(d, d);
                for (k, &(a, b)) in pairs.iter().enumerate() {
                    rho[(a, b)] = x[k];
                    rho[(b, a)] = x[k];
                }
                return Ok(rho);
            }
        }
        Err("reference relaxation did not converge".into())
    }

    /// `[ee, jj, jz, j2, e2, g2x, g2z]`.
    fn observables(&self, rho: &DMatrix<f64>) -> [f64; 7] {
        let tr = |o: &DMatrix<f64>| (o * rho).trace();
        let (jp, ep) = (&self.j_plus, &self.e_plus);
        let (jm, em) = (jp.transpose(), ep.transpose());
        let e_z = (ep * &em - &em * ep) * 0.5;
        let casimir = |p: &DMatrix<f64>, m: &DMatrix<f64>, z: &DMatrix<f64>| (p * m + m * p) * 0.5 + z * z;
        let ee = tr(&(ep * &em));
        let jj = tr(&(&jm * jp));
        [
            ee,
            jj,
            tr(&self.j_z),
            tr(&casimir(jp, &jm, &self.j_z)),
            tr(&casimir(ep, &em, &e_z)),
            tr(&(ep * ep * &em * &em)) / (ee * ee),
            tr(&(&jm * &jm * jp * jp)) / (jj * jj),
        ]
    }
}

fn block_observables(n: usize, ratio: f64) -> Result<[f64; 7], String> {
    let model = BlockModel::new(n).map_err(err)?;
    let params = ModelParams::from_ratio(n, ratio).map_err(err)?;
    let bd = steady_state_blocks(&model, &params, SteadyStateOptions::default()).map_err(err)?;
    let m: Moments = block_moments(&model, &bd).map_err(err)?;
    let (g2x, g2z) = g2_zero(&m).map_err(err)?;
    Ok([m.ee, m.jj, m.jz(), m.j_casimir(), m.e_casimir(), g2x, g2z])
}

fn oracle_equivalence() -> Check {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let fq = FirstQuantized::new(n);
        for ratio in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let reference = fq.observables(&fq.steady_state(ratio, 1.0)?);
            let block = block_observables(n, ratio)?;
            for (a, b) in block.iter().zip(&reference) {
                // unit floor keeps ⟨J_z⟩ ≈ 0 at ρ = 1 meaningful
                worst = worst.max(rel(*a, *b, 1.0));
            }
        }
    }
    Ok((worst <= 1e-7, format!("max relative deviation {worst:.2e} (tol 1e-7)")))
}

// ---------------------------------------------------------------------------
// Sweep-based checks.

struct Sweep {
    table: ResultTable,
}

impl Sweep {
    fn new(cfg: &RunConfig) -> Result<Self, String> {
        let outputs = steady::tables(cfg).map_err(err)?;
        Ok(Self {
            table: outputs.into_iter().next().ok_or("no steady table")?.table,
        })
    }

    fn rows(&self, n: usize) -> Vec<usize> {
        let ns = self.table.numbers("n_atoms").unwrap();
        (0..ns.len()).filter(|&i| ns[i] == Some(n as f64)).collect()
    }

    fn col(&self, name: &str, rows: &[usize]) -> Result<Vec<f64>, String> {
        let all = self.table.numbers(name).map_err(err)?;
        rows.iter()
            .map(|&i| all[i].ok_or_else(|| format!("missing {name} in row {i}")))
            .collect()
    }
}

fn flux_balance(sweep: &Sweep) -> Check {
    let mut worst: f64 = 0.0;
    let mut bad_status = 0;
    for n in [4, 10, 20] {
        let rows = sweep.rows(n);
        let (ix, iz, r) = (sweep.col("ix", &rows)?, sweep.col("iz", &rows)?, sweep.col("ratio", &rows)?);
        for k in 0..rows.len() {
            worst = worst.max(rel(ix[k], r[k] * iz[k], 0.0));
            bad_status += usize::from(sweep.table.rows[rows[k]][8] != Cell::Text("ok".into()));
        }
    }
    Ok((
        worst <= 1e-8 && bad_status == 0,
        format!("max relative residual {worst:.2e} (tol 1e-8), {bad_status} rows flagged"),
    ))
}

fn g2_columns(n: usize, ratios: &[f64]) -> Result<(Vec<f64>, Vec<f64>), String> {
    let model = BlockModel::new(n).map_err(err)?;
    let mut gx = Vec::new();
    let mut gz = Vec::new();
    for &r in ratios {
        let params = ModelParams::from_ratio(n, r).map_err(err)?;
        let bd = steady_state_blocks(&model, &params, SteadyStateOptions::default()).map_err(err)?;
        let (x, z) = g2_zero(&block_moments(&model, &bd).map_err(err)?).map_err(err)?;
        gx.push(x);
        gz.push(z);
    }
    Ok((gx, gz))
}

fn exchange_symmetry(sweep: &Sweep, ratios: &[f64]) -> Check {
    let mut worst: f64 = 0.0;
    let mut jz_mid: f64 = 0.0;
    let last = ratios.len() - 1;
    for n in [4, 10, 20] {
        let rows = sweep.rows(n);
        let (ix, iz, jz) = (sweep.col("ix", &rows)?, sweep.col("iz", &rows)?, sweep.col("jz", &rows)?);
        let (gx, gz) = g2_columns(n, ratios)?;
        for k in 0..=last {
            let m = last - k;
            worst = worst
                .max(rel(iz[k], ix[m], 0.0))
                .max(rel(gz[k], gx[m], 0.0))
                .max(rel(jz[k], -jz[m], 1.0));
        }
        jz_mid = jz_mid.max(jz[last / 2].abs());
    }
    Ok((
        worst <= 1e-8 && jz_mid <= 1e-8,
        format!("max mirrored deviation {worst:.2e}, max |<J_z>| at ratio 1 {jz_mid:.2e} (tol 1e-8)"),
    ))
}

fn superradiant_scaling() -> Check {
    let sweep = Sweep::new(&cfg(&[8, 10, 12, 20], 10.0, 10.0, 1))?;
    let per_n2 = |n: usize| -> Result<f64, String> { Ok(sweep.col("ix", &sweep.rows(n))?[0] / (n * n) as f64) };
    let (a10, a20) = (per_n2(10)?, per_n2(20)?);
    let fit = thermo_fit(&[(8, per_n2(8)?), (12, per_n2(12)?), (20, a20)]).map_err(err)?;
    let change = (a20 - a10).abs() / a10;
    Ok((
        change <= 0.25 && fit.x > 0.0,
        format!("<E+E->/N^2 N=10 {a10:.4}, N=20 {a20:.4} (change {:.1}%), fit X = {:.4}", 100.0 * change, fit.x),
    ))
}

fn bunching(ratios: &[f64]) -> Check {
    let (gx, gz) = g2_columns(20, ratios)?;
    let min_gx = gx.iter().copied().fold(f64::INFINITY, f64::min);
    let (low, high) = (gx[0], gz[ratios.len() - 1]);
    Ok((
        min_gx > 1.0 && low > 2.0 && high > 2.0,
        format!("N=20: min g2x {min_gx:.4}, g2x(0.01) {low:.4}, g2z(100) {high:.4}"),
    ))
}

// ---------------------------------------------------------------------------

fn coherent_information() -> Check {
    let out = entropy::tables(&cfg(&[10], 1.0, 100.0, 3)).map_err(err)?;
    let t = &out[0].table;
    let get = |name: &str, row: usize| -> Result<f64, String> {
        t.numbers(name).map_err(err)?[row].ok_or_else(|| format!("missing {name}"))
    };
    // rows: product, ratio 1, 10, 100
    let (ijk_1, ikj_1) = (get("i_j_k", 1)?, get("i_k_j", 1)?);
    let (ijk_100, ikj_100) = (get("i_j_k", 3)?, get("i_k_j", 3)?);
    let bound = 10.0 * LN_2;
    let mut within = true;
    for row in 1..4 {
        within &= get("i_j_k", row)? <= bound && get("i_k_j", row)? <= bound;
    }
    let high = (3.2..=4.8).contains(&ijk_100) && (2.2..=3.8).contains(&ikj_100);
    let negative = ijk_1 < 0.0;
    Ok((
        high && negative && within,
        format!(
            "N=10: ratio 100 I(J>K) {ijk_100:.3} in [3.2,4.8]: {high_jk}, I(K>J) {ikj_100:.3} in [2.2,3.8]: {high_kj}; \
             ratio 1 I(J>K) {ijk_1:.3} < 0: {negative} (I(K>J) {ikj_1:.3}); all <= N ln2 = {bound:.3}: {within}",
            high_jk = (3.2..=4.8).contains(&ijk_100),
            high_kj = (2.2..=3.8).contains(&ikj_100),
        ),
    ))
}

fn random_pure_state(basis: &SymmetricBasis, seed: u64) -> Vec<C64> {
    let mut rng = trajectory_rng(seed, 0);
    let mut psi: Vec<C64> = (0..basis.len())
        .map(|_| C64::new(uniform(&mut rng) - 0.5, uniform(&mut rng) - 0.5))
        .collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    psi
}

fn algorithm_self_consistency() -> Check {
    let basis = Arc::new(SymmetricBasis::new(6, Flavor::MomentumLr).map_err(err)?);
    let layers = LayerDecomposition::new(basis.clone()).map_err(err)?;
    let mut pure_gap: f64 = 0.0;
    for seed in 0..20 {
        let rho = DensityMatrix::pure(basis.clone(), &random_pure_state(&basis, seed)).map_err(err)?;
        let s_j = layers.algebraic_entropy(&rho, Subsystem::J).map_err(err)?;
        let s_k = layers.algebraic_entropy(&rho, Subsystem::K).map_err(err)?;
        pure_gap = pure_gap.max((s_j - s_k).abs());
    }
    let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let mut product: f64 = 0.0;
    for n in 1..=8 {
        let b = Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr).map_err(err)?);
        let rho = DensityMatrix::pure(b.clone(), &product_state(&b, [one, zero, zero, zero])).map_err(err)?;
        let l = LayerDecomposition::new(b).map_err(err)?;
        for keep in [Subsystem::J, Subsystem::K] {
            product = product.max(l.algebraic_entropy(&rho, keep).map_err(err)?.abs());
        }
    }
    let mut sum_rule = true;
    for n in 1..=20usize {
        let total: u128 = (0..=n as u32)
            .rev()
            .step_by(2)
            .map(|two_l| multiplicity(n, two_l).map(|d| d * u128::from(two_l + 1)))
            .sum::<Result<u128, _>>()
            .map_err(err)?;
        sum_rule &= total == 1u128 << n;
    }
    Ok((
        pure_gap <= 1e-6 && product <= 1e-9 && sum_rule,
        format!(
            "random N=6 pure |S_J-S_K| max {pure_gap:.2e} (tol 1e-6), product-state entropy max {product:.2e} (tol 1e-9), \
             multiplicity sum rule N<=20: {sum_rule}"
        ),
    ))
}

fn mcwf_consistency() -> Check {
    let n = 6;
    let mut worst_z: f64 = 0.0;
    let mut outside = 0;
    for ratio in [0.1, 1.0, 10.0] {
        let params = ModelParams::from_ratio(n, ratio).map_err(err)?;
        let model = TrajectoryModel::new(&params).map_err(err)?;
        let (_, _, jz) = hermitian_components(&build_ladder(Ladder::JPlus, model.basis()).map_err(err)?).map_err(err)?;
        let horizon = default_t_final(&params).map_err(err)?;
        let times: Vec<f64> = (1..=20).map(|k| horizon * k as f64 / 20.0).collect();
        let ens = run_ensemble(&model, 400, &times, &[jz.clone()], 2024, &McwfOptions::default()).map_err(err)?;
        let InitialState::Full(rho0) = initial_state(n, Representation::FullLr).map_err(err)? else {
            return Err("expected a dense initial state".into());
        };
        let options = EvolveOptions {
            checkpoints: times.clone(),
            ..EvolveOptions::default()
        };
        let exact = evolve(&rho0, &params, horizon, &options).map_err(err)?;
        for (k, (_, rho)) in exact.checkpoints.iter().enumerate() {
            let want = rho.expectation(&jz).map_err(err)?.re;
            let (got, se) = (ens.mean[0][k], ens.std_err[0][k]);
            let z = if se > 0.0 {
                (got - want).abs() / se
            } else if (got - want).abs() < 1e-9 {
                0.0
            } else {
                f64::INFINITY
            };
            worst_z = worst_z.max(z);
            outside += usize::from(z > 3.0);
        }
    }
    Ok((
        outside == 0,
        format!("N=6, 400 trajectories, 60 checkpoints: max |mean - exact|/SE {worst_z:.2}, {outside} beyond 3 SE"),
    ))
}

/// Post-transient entanglement and `F_a <= λ_max` over one trajectory run.
fn trajectory_qfi_at(n: usize, n_traj: usize) -> Check {
    let mut c = cfg(&[n], 0.1, 10.0, 3);
    c.override_guards = true;
    c.traj.n_traj = n_traj;
    let out = traj::tables(&c).map_err(err)?;
    let qfi = &out[0].table;
    let summary = &out[2].table;
    let col = |t: &ResultTable, name: &str| -> Result<Vec<f64>, String> {
        t.numbers(name).map_err(err)?.into_iter().map(|v| v.ok_or("missing value".to_string())).collect()
    };
    let post_min = col(summary, "post_min_lambda_over_n2")?;
    let initial = col(summary, "initial_lambda_max")?;
    let lambda = col(qfi, "lambda_max")?;
    let f_accel = col(qfi, "f_accel")?;
    let min = post_min.iter().copied().fold(f64::INFINITY, f64::min);
    let init_err = initial.iter().map(|v| (v - n as f64).abs()).fold(0.0, f64::max);
    let violations = lambda.iter().zip(&f_accel).filter(|(l, f)| **f > **l * (1.0 + 1e-9) + 1e-9).count();
    Ok((
        min > 0.15 && init_err <= 1e-6 && violations == 0,
        format!(
            "N={n}, {} trajectories over ratios 0.1/1/10: min post-transient lambda_max/N^2 {min:.4} (> 0.15), \
             initial |lambda_max - N| {init_err:.1e} (tol 1e-6), F_a > lambda_max in {violations} of {} samples",
            initial.len(),
            lambda.len()
        ),
    ))
}

fn rotation_identity() -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=20 {
        let basis = Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr).map_err(err)?);
        let gens = GeneratorBasis::new(basis.clone()).map_err(err)?;
        let frame = AccelerationFrame::new(basis.clone()).map_err(err)?;
        let dir = GeneratorBasis::interferometer_direction() / FRAC_1_SQRT_2;
        let pulled = frame.pull_back(&gens.combine(&dir, "U_x - V_x").map_err(err)?).map_err(err)?;
        let mut dense = pulled.matrix().to_dense();
        for (i, kz) in frame.k_z().iter().enumerate() {
            dense[(i, i)] -= C64::new(*kz, 0.0);
        }
        worst = worst.max(dense.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok((worst <= 1e-9, format!("max Frobenius deviation over N<=20: {worst:.2e} (tol 1e-9)")))
}

fn accel_bound_on_random_states() -> Check {
    let mut violations = 0;
    let mut count = 0;
    for n in 1..=6 {
        let basis = Arc::new(SymmetricBasis::new(n, Flavor::MomentumLr).map_err(err)?);
        let gens = GeneratorBasis::new(basis.clone()).map_err(err)?;
        let frame = AccelerationFrame::new(basis.clone()).map_err(err)?;
        for seed in 0..10 {
            let psi = random_pure_state(&basis, 1000 + seed);
            let s = superrad_core::qfi::qfi_sample(&gens, &frame, 0.0, &psi).map_err(err)?;
            count += 1;
            violations += usize::from(s.f_accel > s.lambda_max * (1.0 + 1e-9) + 1e-9);
        }
    }
    Ok((violations == 0, format!("F_a > lambda_max in {violations} of {count} random states, N<=6")))
}

fn fit_exactness() -> Check {
    let mut worst: f64 = 0.0;
    for (x, y, z) in [(0.37, -1.3, 2.1), (1.0, 0.0, 0.0), (-0.25, 4.5, -12.0), (1e-3, 0.2, 30.0)] {
        for ns in [&[8usize, 12, 20][..], &[4, 6, 8, 10, 16, 40][..]] {
            let data: Vec<(usize, f64)> = ns
                .iter()
                .map(|&n| (n, x + y / n as f64 + z / (n * n) as f64))
                .collect();
            let f = thermo_fit(&data).map_err(err)?;
            worst = worst.max((f.x - x).abs()).max((f.y - y).abs()).max((f.z - z).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max coefficient error {worst:.2e} (tol 1e-12)")))
}

fn main() {
    let mut report = Report {
        failed: 0,
        errors: 0,
        only: std::env::var("SUPERRAD_ACCEPT_ONLY").ok(),
    };
    let grid = cfg(&[4, 10, 20], 0.01, 100.0, 41);
    let ratios = grid.ratio_grid.points();

    report.run("oracle equivalence (N=2,3 vs dense 4^N)", oracle_equivalence);
    let sweep = std::cell::OnceCell::new();
    let sweep = || sweep.get_or_init(|| Sweep::new(&grid)).as_ref().map_err(Clone::clone);
    report.run("flux balance (N=4,10,20, 41-point grid)", || flux_balance(sweep()?));
    report.run("exchange symmetry (N=4,10,20, 41-point grid)", || exchange_symmetry(sweep()?, &ratios));
    report.run("superradiant N^2 scaling at W=10", superradiant_scaling);
    report.run("photon bunching at N=20", || bunching(&ratios));
    report.run("coherent information at N=10", coherent_information);
    report.run("layer-decomposition entropy self-consistency", algorithm_self_consistency);
    report.run("trajectory ensemble vs master equation (N=6)", mcwf_consistency);
    report.run("trajectory QFI at N=20", || trajectory_qfi_at(20, 50));
    if std::env::var("SUPERRAD_ACCEPT_N50").is_ok_and(|v| v == "1") {
        report.run("trajectory QFI at N=50", || trajectory_qfi_at(50, 50));
    } else if report.only.is_none() {
        println!("SKIP  trajectory QFI at N=50: set SUPERRAD_ACCEPT_N50=1 to run (about an hour on one core)");
    }
    report.run("rotation identity (N<=20)", rotation_identity);
    report.run("acceleration QFI bound on random states", accel_bound_on_random_states);
    report.run("large-N fit exactness on synthetic data", fit_exactness);

    println!(
        "acceptance: {} failed, {} could not be evaluated",
        report.failed, report.errors
    );
    if report.errors > 0 {
        std::process::exit(1);
    }
}
