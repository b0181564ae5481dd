//! Long-time limit of the full state from `|g,l>^⊗N`, inter-sector coherences included.
//!
//! In the `±` flavor the coherence block between sectors `a` and `b` evolves
//! on its own, and the initial state populates only its all-ground corner.
//! Each block's limit is the projection of that corner onto the block's
//! kernel: `X∞ = r (y·x0)/(y·r)` with `r`, `y` its right and left null vectors.
//! A block has a kernel when the back-substituted candidate `r` solves the
//! layered system to [`RESIDUAL_TOL`]; otherwise the coherence decays.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::block::{steady_state_block, sweep_for, BlockModel, SteadyStateOptions, RESIDUAL_TOL};
use super::density::{seed_position, DensityMatrix};
use super::params::ModelParams;
use crate::rotation::{basis_rotation, BasisRotation};
use crate::{Error, Result, C64};

/// Relative residual above which a coherence block is taken to have no kernel.
pub const DECAY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct FullSteadyState {
    pub rho_pm: DensityMatrix,
    pub rho_lr: DensityMatrix,
    /// Number of sector pairs `a < b` whose coherence survives.
    pub persistent_coherences: usize,
}

/// Amplitudes of `|g,l>^⊗N` on the sector seeds, in `±` coordinates.
pub fn seed_amplitudes(model: &BlockModel, rot: &BasisRotation) -> Result<Vec<f64>> {
    let d = rot.lr_basis().len();
    let mut psi = vec![C64::new(0.0, 0.0); d];
    psi[0] = C64::new(1.0, 0.0);
    let pm = rot.to_pm_vector(&psi);
    let layout = model.layout();
    let mut amps = vec![0.0; model.n_atoms() + 1];
    for (i, z) in pm.iter().enumerate() {
        let (l, local) = layout.position(i);
        if local == seed_position(layout, model.basis(), l) {
            amps[l] = z.re;
        } else if z.norm() > 1e-12 {
            return Err(Error::RepresentationStructure(format!(
                "initial state has weight {z} off the sector seeds"
            )));
        }
    }
    Ok(amps)
}

/// Full-basis steady state reached from all atoms in `|g,l>`.
pub fn steady_state_full(model: &BlockModel, params: &ModelParams) -> Result<FullSteadyState> {
    let n = model.n_atoms();
    if params.n_atoms() != n {
        return Err(Error::Shape("parameters and model disagree on N".into()));
    }
    let rot = basis_rotation(n)?;
    let amps = seed_amplitudes(model, &rot)?;
    let layout = model.layout();
    let d = model.basis().len();
    let mut rho = DMatrix::<f64>::zeros(d, d);
    let mut persistent = 0;

    for a in 0..=n {
        let ss = steady_state_block(model, params, a, SteadyStateOptions::default())?;
        let w = amps[a] * amps[a];
        let idx = layout.sector(a);
        for (r, c, v) in ss.rho.triplets() {
            rho[(idx[r], idx[c])] = w * v;
        }
    }

    for a in 0..=n {
        for b in a + 1..=n {
            let x0 = amps[a] * amps[b];
            if x0 == 0.0 {
                continue;
            }
            let system = model.coherence_system(params, a, b, 0);
            let sweep = sweep_for(params);
            let el = system.eliminate(sweep).map_err(|s| Error::DegenerateSteadyState {
                sector: a,
                detail: format!("coherence with sector {b} stationary at layer {}", s.layer),
            })?;
            let r = el.back_substitute(DVector::from_element(1, 1.0));
            let r_norm = r.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt();
            let rel = system.residual(&r) / (system.frobenius() * r_norm);
            if rel >= DECAY_TOL {
                continue;
            }
            if rel > RESIDUAL_TOL {
                return Err(Error::SolverQuality(format!(
                    "coherence between sectors {a} and {b} is neither stationary nor decaying \
                     (relative residual {rel:e})"
                )));
            }
            let left = system.transpose().eliminate(sweep).map_err(|s| Error::DegenerateSteadyState {
                sector: a,
                detail: format!("adjoint coherence with sector {b} singular at layer {}", s.layer),
            })?;
            let y = left.back_substitute(DVector::from_element(1, 1.0));
            let overlap: f64 = r.iter().zip(&y).map(|(ri, yi)| ri.dot(yi)).sum();
            if overlap.abs() < 1e-300 {
                return Err(Error::DegenerateSteadyState {
                    sector: a,
                    detail: format!("non-semisimple zero mode in coherence with sector {b}"),
                });
            }
            let coef = y[0][0] * x0 / overlap;
            let scaled: Vec<DVector<f64>> = r.iter().map(|v| v * coef).collect();
            let block = model.assemble(a, b, 0, &scaled);
            let (ia, ib) = (layout.sector(a), layout.sector(b));
            for (i, j, v) in block.triplets() {
                rho[(ia[i], ib[j])] = v;
                rho[(ib[j], ia[i])] = v;
            }
            persistent += 1;
        }
    }

    let rho_c = rho.map(|v| C64::new(v, 0.0));
    let rho_lr = rot.dense_to_lr(&rho_c);
    Ok(FullSteadyState {
        rho_pm: DensityMatrix::new(model.basis().clone(), rho_c)?,
        rho_lr: DensityMatrix::new(rot.lr_basis().clone(), rho_lr)?,
        persistent_coherences: persistent,
    })
}
