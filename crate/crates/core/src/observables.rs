//! Steady-state observables: intensities, inversion, Casimirs, `g2(0)`,
//! intensity noise and the finite-size fit `y = X + Y/N + Z/N²`.
//!
//! Every observable here is block diagonal, so it is evaluated sector by
//! sector from the real jump operators `J+` and `E-` of [`BlockModel`] and
//! never in the full basis.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{Matrix3, Vector3};
#[allow(unused_imports)]
use num_traits::Float;

use crate::blocks::BlockOperator;
use crate::liouvillian::{BlockDensity, BlockModel, BlockSteadyState, ModelParams};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Relative tolerance of the flux balance `Γ⟨E+E-⟩ = W⟨J-J+⟩`.
pub const FLUX_TOL: f64 = 1e-8;

/// `Σ_ℓ c_ℓ Tr[O_ℓ ρ_ℓ]`.
pub fn expectation_blockwise(op: &BlockOperator, bd: &BlockDensity) -> Result<C64> {
    if op.n_atoms() != bd.n_atoms() {
        return Err(Error::Shape(format!(
            "`{}` is for N = {}, state for N = {}",
            op.label(),
            op.n_atoms(),
            bd.n_atoms()
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for ((o, rho), w) in op.blocks().iter().zip(bd.blocks()).zip(bd.weights()) {
        let tr: C64 = o.triplets().map(|(i, j, v)| v * rho.get(j, i)).sum();
        acc += tr * *w;
    }
    Ok(acc)
}

/// `Tr[A ρ Aᵀ]` for real `A` and symmetric `ρ`.
fn sandwich(a: &CsrMatrix<f64>, rho: &CsrMatrix<f64>) -> Result<f64> {
    let ar = a.matmul(rho)?;
    Ok(ar.triplets().map(|(i, j, v)| v * a.get(i, j)).sum())
}

/// Normal-ordered moments of one sector state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    /// `⟨E+E-⟩`
    pub ee: f64,
    /// `⟨E-E+⟩`
    pub ee_anti: f64,
    /// `⟨J-J+⟩`
    pub jj: f64,
    /// `⟨J+J-⟩`
    pub jj_anti: f64,
    /// `⟨J_z²⟩`
    pub jz_sq: f64,
    /// `⟨E_z²⟩`
    pub ez_sq: f64,
    /// `⟨E+E+E-E-⟩`
    pub ee_ee: f64,
    /// `⟨J-J-J+J+⟩`
    pub jj_jj: f64,
}

impl Moments {
    pub fn jz(&self) -> f64 {
        0.5 * (self.jj_anti - self.jj)
    }

    pub fn ez(&self) -> f64 {
        0.5 * (self.ee - self.ee_anti)
    }

    /// `J² = J-J+ + J_z + J_z²`.
    pub fn j_casimir(&self) -> f64 {
        self.jj + self.jz() + self.jz_sq
    }

    /// `E² = E+E- - E_z + E_z²`.
    pub fn e_casimir(&self) -> f64 {
        self.ee - self.ez() + self.ez_sq
    }

    fn scaled_add(&mut self, w: f64, o: &Moments) {
        self.ee += w * o.ee;
        self.ee_anti += w * o.ee_anti;
        self.jj += w * o.jj;
        self.jj_anti += w * o.jj_anti;
        self.jz_sq += w * o.jz_sq;
        self.ez_sq += w * o.ez_sq;
        self.ee_ee += w * o.ee_ee;
        self.jj_jj += w * o.jj_jj;
    }

    /// `Σ_ℓ c_ℓ m_ℓ`.
    pub fn combine(weights: &[f64], sectors: &[Moments]) -> Result<Moments> {
        if weights.len() != sectors.len() {
            return Err(Error::Shape(format!(
                "{} weights for {} sectors",
                weights.len(),
                sectors.len()
            )));
        }
        let mut out = Moments::default();
        for (w, m) in weights.iter().zip(sectors) {
            out.scaled_add(*w, m);
        }
        Ok(out)
    }
}

/// Moments of a real symmetric state on sector `ℓ`.
pub fn sector_moments(model: &BlockModel, l: usize, rho: &CsrMatrix<f64>) -> Result<Moments> {
    if l > model.n_atoms() {
        return Err(Error::Domain(format!("sector {l} outside 0..={}", model.n_atoms())));
    }
    let s = model.sector(l);
    if rho.nrows() != s.dim() || rho.ncols() != s.dim() {
        return Err(Error::Shape(format!("sector {l} state has the wrong size")));
    }
    let jp = s.j_plus();
    let em = s.e_minus();
    let jp_t = jp.transpose();
    let em_t = em.transpose();
    let jz = jp.matmul(&jp_t)?.lin_comb(0.5, &jp_t.matmul(jp)?, -0.5)?;
    let ez = em_t.matmul(em)?.lin_comb(0.5, &em.matmul(&em_t)?, -0.5)?;
    Ok(Moments {
        ee: sandwich(em, rho)?,
        ee_anti: sandwich(&em_t, rho)?,
        jj: sandwich(jp, rho)?,
        jj_anti: sandwich(&jp_t, rho)?,
        jz_sq: sandwich(&jz, rho)?,
        ez_sq: sandwich(&ez, rho)?,
        ee_ee: sandwich(&em.matmul(em)?, rho)?,
        jj_jj: sandwich(&jp.matmul(jp)?, rho)?,
    })
}

/// Moments of a block density whose blocks are real.
pub fn block_moments(model: &BlockModel, bd: &BlockDensity) -> Result<Moments> {
    if bd.n_atoms() != model.n_atoms() {
        return Err(Error::Shape("block density and model disagree on N".into()));
    }
    let sectors = bd
        .blocks()
        .iter()
        .enumerate()
        .map(|(l, b)| {
            let real = b
                .to_real()
                .ok_or_else(|| Error::Precondition(format!("sector {l} state is not real")))?;
            sector_moments(model, l, &real)
        })
        .collect::<Result<Vec<_>>>()?;
    Moments::combine(bd.weights(), &sectors)
}

/// Moments of sector steady states combined with `weights`.
pub fn steady_moments(model: &BlockModel, states: &[BlockSteadyState], weights: &[f64]) -> Result<Moments> {
    let sectors = states
        .iter()
        .map(|s| sector_moments(model, s.sector, &s.rho))
        .collect::<Result<Vec<_>>>()?;
    Moments::combine(weights, &sectors)
}

/// `|Γ Ix - W Iz| / max(Γ Ix, W Iz)` (zero when both fluxes vanish).
pub fn flux_residual(m: &Moments, params: &ModelParams) -> f64 {
    let out_x = params.decay() * m.ee;
    let out_z = params.pump() * m.jj;
    let scale = out_x.abs().max(out_z.abs());
    if scale == 0.0 {
        0.0
    } else {
        (out_x - out_z).abs() / scale
    }
}

/// `(Ix, Iz) = (⟨E+E-⟩, ⟨J-J+⟩)`, checked against the flux balance.
pub fn intensities(m: &Moments, params: &ModelParams) -> Result<(f64, f64)> {
    let r = flux_residual(m, params);
    if r > FLUX_TOL {
        return Err(Error::SolverQuality(format!(
            "flux balance violated: relative residual {r:e} > {FLUX_TOL:e}"
        )));
    }
    Ok((m.ee, m.jj))
}

/// `(g2x, g2z) = (⟨E+E+E-E-⟩/⟨E+E-⟩², ⟨J-J-J+J+⟩/⟨J-J+⟩²)`.
pub fn g2_zero(m: &Moments) -> Result<(f64, f64)> {
    let tiny = f64::MIN_POSITIVE.sqrt();
    if m.ee <= tiny {
        return Err(Error::UndefinedStatistics(format!("x-cavity intensity is {:e}", m.ee)));
    }
    if m.jj <= tiny {
        return Err(Error::UndefinedStatistics(format!("z-cavity intensity is {:e}", m.jj)));
    }
    Ok((m.ee_ee / (m.ee * m.ee), m.jj_jj / (m.jj * m.jj)))
}

/// `g2(0)` of a thermal ensemble of `N` emitters, `2(1 - 1/N)`.
pub fn thermal_g2(n_atoms: usize) -> f64 {
    2.0 * (1.0 - 1.0 / n_atoms as f64)
}

/// `ΔI² = I²(g2 - 1) + B·I` for detector bandwidth `B`.
pub fn intensity_fluctuations(intensity: f64, g2: f64, bandwidth: f64) -> Result<f64> {
    if !(intensity >= 0.0) {
        return Err(Error::Domain(format!("intensity must be non-negative, got {intensity}")));
    }
    if !(bandwidth > 0.0) {
        return Err(Error::Domain(format!("bandwidth must be positive, got {bandwidth}")));
    }
    Ok(intensity * intensity * (g2 - 1.0) + bandwidth * intensity)
}

/// Observables of one `(N, W/Γ)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n_atoms: usize,
    pub ratio: f64,
    pub ix: f64,
    pub iz: f64,
    pub jz: f64,
    pub j2: f64,
    pub e2: f64,
    pub g2x: f64,
    pub g2z: f64,
    pub flux_residual: f64,
}

impl SweepPoint {
    pub fn from_moments(m: &Moments, params: &ModelParams) -> Result<Self> {
        let (ix, iz) = intensities(m, params)?;
        let (g2x, g2z) = g2_zero(m)?;
        Ok(Self {
            n_atoms: params.n_atoms(),
            ratio: params.ratio(),
            ix,
            iz,
            jz: m.jz(),
            j2: m.j_casimir(),
            e2: m.e_casimir(),
            g2x,
            g2z,
            flux_residual: flux_residual(m, params),
        })
    }
}

/// Coefficients of `y = X + Y/N + Z/N²`; `X` is the large-`N` value.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `‖model - data‖₂`.
    pub residual: f64,
    pub n_values: Vec<usize>,
}

/// Least-squares fit through the normal equations.
pub fn thermo_fit(values: &[(usize, f64)]) -> Result<FitResult> {
    let mut ns: Vec<usize> = values.iter().map(|(n, _)| *n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 distinct N, got {}", ns.len())));
    }
    if ns[0] == 0 {
        return Err(Error::Fit("N = 0 has no 1/N".into()));
    }
    let row = |n: usize| {
        let inv = 1.0 / n as f64;
        Vector3::new(1.0, inv, inv * inv)
    };
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for (n, y) in values {
        if !y.is_finite() {
            return Err(Error::Fit(format!("non-finite value at N = {n}")));
        }
        let r = row(*n);
        ata += r * r.transpose();
        atb += r * *y;
    }
    let coef = ata
        .lu()
        .solve(&atb)
        .filter(|c| c.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::Fit("normal equations are singular".into()))?;
    let residual = values
        .iter()
        .map(|(n, y)| (row(*n).dot(&coef) - y).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(FitResult {
        x: coef[0],
        y: coef[1],
        z: coef[2],
        residual,
        n_values: ns,
    })
}
