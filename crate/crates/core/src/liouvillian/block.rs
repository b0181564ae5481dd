//! Per-sector generators and steady states.
//!
//! Inside a sector the jump operators are real. `J+` raises and `E-` lowers
//! the excitation number `e = n(e,-) + n(e,+)`, so the generator maps the
//! coherence between layers `e` and `e+q` only onto layers with the same `q`.
//! The steady state lives at `q = 0` and the `q = 0` equations are
//! block-tridiagonal in `e`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::density::{BlockDensity, HERMITIAN_TOL};
use super::params::ModelParams;
use super::tridiag::{BlockTridiagonal, Sweep};
use crate::basis::{Flavor, SymmetricBasis};
use crate::blocks::{block_decompose, SectorLayout};
use crate::operators::{build_ladder, Ladder};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Residual gate: `‖ℒ_ℓ ρ‖_F ≤ RESIDUAL_TOL · ‖ℒ_ℓ‖_F`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Real jump operators of one sector, split into excitation layers.
#[derive(Debug, Clone)]
pub struct Sector {
    dim: usize,
    layers: Vec<Vec<usize>>,
    j_plus: CsrMatrix<f64>,
    e_minus: CsrMatrix<f64>,
    pump_loss: CsrMatrix<f64>,
    decay_loss: CsrMatrix<f64>,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Local indices with excitation `e`, for `e = 0..=N`.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn j_plus(&self) -> &CsrMatrix<f64> {
        &self.j_plus
    }

    pub fn e_minus(&self) -> &CsrMatrix<f64> {
        &self.e_minus
    }

    fn layer_block(&self, m: &CsrMatrix<f64>, row: usize, col: usize) -> DMatrix<f64> {
        m.submatrix(&self.layers[row], &self.layers[col]).to_dense()
    }

    fn loss(&self, p: &ModelParams, e: usize) -> DMatrix<f64> {
        self.layer_block(&self.pump_loss, e, e) * p.pump() + self.layer_block(&self.decay_loss, e, e) * p.decay()
    }
}

/// Sector operators for one atom number, reused across rate parameters.
#[derive(Debug, Clone)]
pub struct BlockModel {
    n_atoms: usize,
    basis: Arc<SymmetricBasis>,
    layout: SectorLayout,
    sectors: Vec<Sector>,
}

impl BlockModel {
    pub fn new(n_atoms: usize) -> Result<Self> {
        let basis = Arc::new(SymmetricBasis::new(n_atoms, Flavor::MomentumPm)?);
        let layout = SectorLayout::new(&basis)?;
        let jp = block_decompose(&build_ladder(Ladder::JPlus, &basis)?)?;
        let em = block_decompose(&build_ladder(Ladder::EMinus, &basis)?)?;
        let real = |m: &CsrMatrix<C64>| {
            m.to_real()
                .ok_or_else(|| Error::RepresentationStructure("sector jump operator is not real".into()))
        };
        let mut sectors = Vec::with_capacity(n_atoms + 1);
        for l in 0..=n_atoms {
            let j_plus = real(jp.block(l))?;
            let e_minus = real(em.block(l))?;
            let pump_loss = j_plus.transpose().matmul(&j_plus)?;
            let decay_loss = e_minus.transpose().matmul(&e_minus)?;
            let mut layers = vec![Vec::new(); n_atoms + 1];
            for (local, &global) in layout.sector(l).iter().enumerate() {
                layers[basis.state(global).excitation() as usize].push(local);
            }
            sectors.push(Sector {
                dim: layout.sector_size(l),
                layers,
                j_plus,
                e_minus,
                pump_loss,
                decay_loss,
            });
        }
        Ok(Self {
            n_atoms,
            basis,
            layout,
            sectors,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// The `±` flavor basis the sectors are cut from.
    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn layout(&self) -> &SectorLayout {
        &self.layout
    }

    pub fn sector(&self, l: usize) -> &Sector {
        &self.sectors[l]
    }

    fn check(&self, params: &ModelParams, l: usize) -> Result<()> {
        if params.n_atoms() != self.n_atoms {
            return Err(Error::Shape(format!(
                "parameters for N = {} on a model for N = {}",
                params.n_atoms(),
                self.n_atoms
            )));
        }
        if l > self.n_atoms {
            return Err(Error::Domain(format!("sector {l} outside 0..={}", self.n_atoms)));
        }
        Ok(())
    }

    /// Layered equations for the coherences `X[S_e(a), S_{e+q}(b)]` between
    /// sectors `a` and `b`. Unknowns are column-major vectorizations.
    pub fn coherence_system(&self, p: &ModelParams, a: usize, b: usize, q: usize) -> BlockTridiagonal {
        let (sa, sb) = (&self.sectors[a], &self.sectors[b]);
        let top = self.n_atoms - q;
        let mut diag = Vec::with_capacity(top + 1);
        let mut sub = Vec::with_capacity(top + 1);
        let mut sup = Vec::with_capacity(top + 1);
        for e in 0..=top {
            let f = e + q;
            let (na, nb) = (sa.layers[e].len(), sb.layers[f].len());
            let ra = sa.loss(p, e);
            let rb = sb.loss(p, f);
            let d = (DMatrix::identity(nb, nb).kronecker(&ra) + rb.transpose().kronecker(&DMatrix::identity(na, na)))
                * -0.5;
            diag.push(d);
            sub.push(if e == 0 {
                DMatrix::zeros(0, 0)
            } else {
                let pa = sa.layer_block(&sa.j_plus, e, e - 1);
                let pb = sb.layer_block(&sb.j_plus, f, f - 1);
                pb.kronecker(&pa) * p.pump()
            });
            sup.push(if e == top {
                DMatrix::zeros(0, 0)
            } else {
                let qa = sa.layer_block(&sa.e_minus, e, e + 1);
                let qb = sb.layer_block(&sb.e_minus, f, f + 1);
                qb.kronecker(&qa) * p.decay()
            });
        }
        BlockTridiagonal { diag, sub, sup }
    }

    /// Scatter layered coherences back into an `a × b` sparse block.
    pub fn assemble(&self, a: usize, b: usize, q: usize, x: &[DVector<f64>]) -> CsrMatrix<f64> {
        let (sa, sb) = (&self.sectors[a], &self.sectors[b]);
        let mut triplets = Vec::new();
        for (e, xe) in x.iter().enumerate() {
            let (ra, rb) = (&sa.layers[e], &sb.layers[e + q]);
            for (j, &col) in rb.iter().enumerate() {
                for (i, &row) in ra.iter().enumerate() {
                    triplets.push((row, col, xe[i + ra.len() * j]));
                }
            }
        }
        CsrMatrix::from_triplets(sa.dim, sb.dim, triplets)
    }
}

/// Vectorized (column-major) generator of sector `ℓ`, dimension `d_ℓ² × d_ℓ²`.
pub fn build_block_liouvillian(model: &BlockModel, params: &ModelParams, l: usize) -> Result<CsrMatrix<f64>> {
    model.check(params, l)?;
    let s = &model.sectors[l];
    let id = CsrMatrix::<f64>::identity(s.dim);
    let loss = s.pump_loss.lin_comb(params.pump(), &s.decay_loss, params.decay())?;
    let jump = s
        .j_plus
        .kron(&s.j_plus)
        .lin_comb(params.pump(), &s.e_minus.kron(&s.e_minus), params.decay())?;
    let anti = id.kron(&loss).add(&loss.transpose().kron(&id))?;
    jump.lin_comb(1.0, &anti, -0.5)
}

/// `‖Σ_k c_k A_k ⊗ B_k‖_F` without forming the Kronecker products.
fn kron_sum_frobenius(terms: &[(f64, &CsrMatrix<f64>, &CsrMatrix<f64>)]) -> f64 {
    let inner = |x: &CsrMatrix<f64>, y: &CsrMatrix<f64>| -> f64 { x.triplets().map(|(i, j, v)| v * y.get(i, j)).sum() };
    let mut acc = 0.0;
    for (ck, ak, bk) in terms {
        for (cm, am, bm) in terms {
            acc += ck * cm * inner(ak, am) * inner(bk, bm);
        }
    }
    acc.max(0.0).sqrt()
}

/// Frobenius norm of the sector generator.
pub fn block_generator_norm(model: &BlockModel, params: &ModelParams, l: usize) -> Result<f64> {
    model.check(params, l)?;
    let s = &model.sectors[l];
    let id = CsrMatrix::<f64>::identity(s.dim);
    let loss = s.pump_loss.lin_comb(params.pump(), &s.decay_loss, params.decay())?;
    let loss_t = loss.transpose();
    Ok(kron_sum_frobenius(&[
        (params.pump(), &s.j_plus, &s.j_plus),
        (params.decay(), &s.e_minus, &s.e_minus),
        (-0.5, &id, &loss),
        (-0.5, &loss_t, &id),
    ]))
}

/// Steady state of one sector.
#[derive(Debug, Clone)]
pub struct BlockSteadyState {
    pub sector: usize,
    /// Unit-trace state on the sector's local indices.
    pub rho: CsrMatrix<f64>,
    /// `‖ℒ_ℓ ρ‖_F`.
    pub residual: f64,
    /// `‖ℒ_ℓ‖_F`.
    pub generator_norm: f64,
}

/// Solver switches for [`steady_state_block`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SteadyStateOptions {
    /// Also prove that no coherence sector `q ≠ 0` carries a stationary element.
    pub verify_coherences: bool,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            verify_coherences: true,
        }
    }
}

/// Elimination direction suited to the rates in `params`.
pub fn sweep_for(params: &ModelParams) -> Sweep {
    Sweep::for_rates(params.pump(), params.decay())
}

/// Unique steady state of sector `ℓ`.
///
/// The generator is trace preserving, so its kernel is at least one-dimensional;
/// nonsingular Schur complements on all but the end layer bound it by one.
/// The end-layer complement is not inspected: its rounding error is weighted
/// by that layer's population and is covered by the residual gate.
///
/// Fails with [`Error::DegenerateSteadyState`] when the kernel is not one-dimensional.
pub fn steady_state_block(
    model: &BlockModel,
    params: &ModelParams,
    l: usize,
    options: SteadyStateOptions,
) -> Result<BlockSteadyState> {
    model.check(params, l)?;
    let system = model.coherence_system(params, l, l, 0);
    let el = system.eliminate(sweep_for(params)).map_err(|s| Error::DegenerateSteadyState {
        sector: l,
        detail: format!(
            "stationary subspace above excitation layer {} (pivot ratio {:e})",
            s.layer, s.pivot_ratio
        ),
    })?;
    let mut x = el.back_substitute(DVector::from_element(1, 1.0));
    let layers = &model.sectors[l].layers;
    let trace: f64 = x
        .iter()
        .zip(layers)
        .map(|(xe, idx)| (0..idx.len()).map(|i| xe[i + idx.len() * i]).sum::<f64>())
        .sum();
    for xe in &mut x {
        *xe /= trace;
    }
    let residual = system.residual(&x);

    if options.verify_coherences {
        for q in 1..=model.n_atoms {
            let sys = model.coherence_system(params, l, l, q);
            let el = sys.eliminate(sweep_for(params)).map_err(|s| Error::DegenerateSteadyState {
                sector: l,
                detail: format!("stationary coherence at offset {q} (layer {})", s.layer),
            })?;
            if el.bottom_pivot_ratio() <= super::tridiag::PIVOT_TOL {
                return Err(Error::DegenerateSteadyState {
                    sector: l,
                    detail: format!("stationary coherence at offset {q}"),
                });
            }
        }
    }

    let raw = model.assemble(l, l, 0, &x);
    let rho = raw.lin_comb(0.5, &raw.transpose(), 0.5)?;
    for (e, idx) in layers.iter().enumerate() {
        let n = idx.len();
        let m = DMatrix::from_column_slice(n, n, x[e].as_slice());
        let m = (&m + m.transpose()) * 0.5;
        let min = m.symmetric_eigenvalues().min();
        if min < -HERMITIAN_TOL {
            return Err(Error::SolverQuality(format!(
                "sector {l}: steady state has eigenvalue {min:e}"
            )));
        }
    }
    let generator_norm = block_generator_norm(model, params, l)?;
    if residual > RESIDUAL_TOL * generator_norm {
        return Err(Error::SolverQuality(format!(
            "sector {l}: residual {residual:e} exceeds {RESIDUAL_TOL:e} × ‖ℒ‖ = {generator_norm:e}"
        )));
    }
    Ok(BlockSteadyState {
        sector: l,
        rho,
        residual,
        generator_norm,
    })
}

/// Assemble per-sector steady states with the given weights.
pub fn block_density_from(
    n_atoms: usize,
    weights: Vec<f64>,
    states: &[BlockSteadyState],
) -> Result<BlockDensity> {
    let mut blocks = Vec::with_capacity(states.len());
    for (l, s) in states.iter().enumerate() {
        if s.sector != l {
            return Err(Error::Shape("sector steady states out of order".into()));
        }
        blocks.push(s.rho.to_complex());
    }
    BlockDensity::new(n_atoms, weights, blocks)
}

/// Steady state of every sector with the initial-state weights `C(N,ℓ)/2^N`.
pub fn steady_state_blocks(
    model: &BlockModel,
    params: &ModelParams,
    options: SteadyStateOptions,
) -> Result<BlockDensity> {
    let states = (0..=model.n_atoms)
        .map(|l| steady_state_block(model, params, l, options))
        .collect::<Result<Vec<_>>>()?;
    block_density_from(model.n_atoms, super::density::initial_weights(model.n_atoms), &states)
}
