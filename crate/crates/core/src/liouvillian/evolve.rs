//! Adaptive Dormand–Prince 5(4) integration of the full master equation.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::density::DensityMatrix;
use super::generator::Generator;
use super::params::ModelParams;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Accepted plus rejected steps allowed before giving up.
    pub max_steps: usize,
    /// Times (ascending, within `(0, t_final]`) at which to record the state.
    pub checkpoints: Vec<f64>,
    /// Stop early once `‖ℒρ‖_F < steady_tol`.
    pub stop_when_steady: bool,
    pub steady_tol: f64,
    /// Largest atom number accepted for dense Liouville-space evolution.
    pub max_atoms: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
            checkpoints: Vec::new(),
            stop_when_steady: false,
            steady_tol: 1e-10,
            max_atoms: 14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    /// `(time, state)` for every requested checkpoint.
    pub checkpoints: Vec<(f64, DensityMatrix)>,
    pub final_state: DensityMatrix,
    pub final_time: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// `‖ℒρ‖_F` at the final state.
    pub residual: f64,
    pub reached_steady_state: bool,
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const STABLE_REAL_STEP: f64 = 3.0;

fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn hermitize(m: &mut DMatrix<C64>) {
    let adj = m.adjoint();
    *m = (&*m + adj) * C64::new(0.5, 0.0);
}

/// Integrate `dρ/dt = ℒρ` from `t = 0` to `t_final`.
pub fn evolve(
    rho: &DensityMatrix,
    params: &ModelParams,
    t_final: f64,
    options: &EvolveOptions,
) -> Result<EvolveResult> {
    let n = rho.basis().n_atoms();
    if n > options.max_atoms {
        return Err(Error::Precondition(format!(
            "dense evolution limited to N <= {} (got {n})",
            options.max_atoms
        )));
    }
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Domain(format!("final time must be positive, got {t_final}")));
    }
    let mut marks = options.checkpoints.clone();
    if marks.windows(2).any(|w| w[1] < w[0]) || marks.iter().any(|&t| t <= 0.0 || t > t_final) {
        return Err(Error::Config("checkpoints must be ascending and inside (0, t_final]".into()));
    }
    marks.dedup();

    let gen = Generator::new(params, rho.basis())?;
    let basis = rho.basis().clone();
    let mut y = rho.matrix().clone();
    let mut t = 0.0;
    let mut k0 = gen.apply(&y);
    let mut residual = frobenius(&k0);
    // Generator eigenvalues lie within twice the loss bound of the origin;
    // keeping `|hλ| <= 3` stays inside the real stability interval, so
    // decaying modes are damped instead of parked at the tolerance level.
    let loss_bound = gen.loss_operator().gershgorin_bound().max(1e-300);
    let h_max = STABLE_REAL_STEP / (2.0 * loss_bound);
    let mut h = (0.01 / loss_bound).min(t_final);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut saved: Vec<(f64, DensityMatrix)> = Vec::with_capacity(marks.len());
    let mut next_mark = 0usize;
    let mut steady = options.stop_when_steady && residual < options.steady_tol;

    while !steady && t < t_final {
        if accepted + rejected >= options.max_steps {
            return Err(Error::NonConvergence {
                steps: accepted + rejected,
                residual,
            });
        }
        let target = marks.get(next_mark).copied().unwrap_or(t_final);
        let mut step = h.min(h_max).min(target - t);
        let hit_target = step >= target - t;
        if hit_target {
            step = target - t;
        }

        let mut k: [DMatrix<C64>; 7] = core::array::from_fn(|_| DMatrix::zeros(0, 0));
        k[0] = k0.clone();
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, a) in A[s].iter().enumerate().take(s) {
                if *a != 0.0 {
                    ys += &k[j] * C64::new(step * a, 0.0);
                }
            }
            k[s] = gen.apply(&ys);
        }
        // The last stage is taken at the fifth-order solution (FSAL).
        let mut y_new = y.clone();
        for (j, a) in A[6].iter().enumerate() {
            if *a != 0.0 {
                y_new += &k[j] * C64::new(step * a, 0.0);
            }
        }
        let mut err_acc = 0.0;
        for idx in 0..y.len() {
            let mut e = C64::new(0.0, 0.0);
            for (j, ej) in E.iter().enumerate() {
                if *ej != 0.0 {
                    e += k[j][idx] * ej;
                }
            }
            let sc = options.atol + options.rtol * y[idx].norm().max(y_new[idx].norm());
            err_acc += (e.norm() * step / sc).powi(2);
        }
        let err = (err_acc / y.len() as f64).sqrt();

        if err <= 1.0 {
            t = if hit_target { target } else { t + step };
            hermitize(&mut y_new);
            y = y_new;
            k0 = gen.apply(&y);
            residual = frobenius(&k0);
            accepted += 1;
            if hit_target && next_mark < marks.len() {
                saved.push((t, DensityMatrix::new(basis.clone(), y.clone())?));
                next_mark += 1;
            }
            if options.stop_when_steady && residual < options.steady_tol {
                steady = true;
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !hit_target || fac < 1.0 {
                h = step * fac;
            }
        } else {
            rejected += 1;
            h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }

    let final_state = DensityMatrix::new(basis.clone(), y)?;
    // A steady early stop stands in for all later checkpoints.
    while saved.len() < marks.len() {
        saved.push((marks[saved.len()], final_state.clone()));
    }
    Ok(EvolveResult {
        checkpoints: saved,
        final_state,
        final_time: t,
        accepted_steps: accepted,
        rejected_steps: rejected,
        residual,
        reached_steady_state: steady,
    })
}
