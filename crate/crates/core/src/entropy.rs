//! Von Neumann entropy and the algebraic entanglement entropy between the
//! spin (`J`) and momentum (`K`) degrees of freedom.
//!
//! The symmetric space splits under `SU(2)_J × SU(2)_K` into layers `(l, l)`,
//! each appearing once. Tracing out one degree of freedom leaves
//! `⊕_l M^(l) ⊗ 1/d_l` on the other, with `d_l` the multiplicity of spin `l`
//! among `N` two-level systems.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{lr, Flavor, SymmetricBasis};
use crate::liouvillian::DensityMatrix;
use crate::math::{binomial_u128, tetrahedral};
use crate::operators::{build_ladder, Ladder};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Eigenvalues at or below this are dropped before taking logarithms.
pub const CLIP: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const NEGATIVE_TOL: f64 = 1e-8;
/// Most negative eigenvalue accepted for a layer matrix.
pub const LAYER_NEGATIVE_TOL: f64 = 1e-9;
/// Smallest Gram-Schmidt residual accepted for a layer seed.
pub const RANK_TOL: f64 = 1e-10;
/// Smallest ladder image norm accepted while filling a layer.
const LADDER_TOL: f64 = 1e-10;

fn entropy_of(eigenvalues: impl IntoIterator<Item = f64>, weight: f64) -> f64 {
    eigenvalues
        .into_iter()
        .filter(|&x| x > CLIP)
        .map(|x| -x * (x / weight).ln())
        .sum()
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(sym).eigenvalues.iter().copied().collect()
}

/// `-Σ λ ln λ` in nats.
pub fn vn_entropy(rho: &DMatrix<C64>) -> Result<f64> {
    if !rho.is_square() {
        return Err(Error::Shape("density matrix is not square".into()));
    }
    let eig = hermitian_eigenvalues(rho);
    if let Some(&min) = eig.iter().find(|&&x| x < -NEGATIVE_TOL) {
        return Err(Error::InvalidState(format!("eigenvalue {min:e} is negative")));
    }
    Ok(entropy_of(eig, 1.0))
}

/// Multiplicity of total spin `two_l/2` among `n` spin-1/2 particles.
pub fn multiplicity(n: usize, two_l: u32) -> Result<u128> {
    let two_l = two_l as usize;
    if two_l > n || (n - two_l) % 2 != 0 {
        return Err(Error::Domain(format!("no spin {two_l}/2 among {n} spin-1/2 particles")));
    }
    let a = (n + two_l) / 2;
    let b = (n - two_l) / 2;
    // N!(2l+1)/((a+1)! b!) = C(N, b)(2l+1)/(a+1)
    let c = binomial_u128(n as u64, b as u64)
        .ok_or_else(|| Error::Domain(format!("multiplicity overflows for N = {n}")))?;
    Ok(c * (two_l as u128 + 1) / (a as u128 + 1))
}

/// Which degree of freedom is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// Internal spin.
    J,
    /// Momentum.
    K,
}

/// One `(2l+1)×(2l+1)` layer: `vector(j, k) ∝ K-^k J-^j seed`.
#[derive(Debug, Clone)]
pub struct LayerBasis {
    two_l: u32,
    vectors: Vec<Vec<f64>>,
}

impl LayerBasis {
    pub fn two_l(&self) -> u32 {
        self.two_l
    }

    pub fn side(&self) -> usize {
        self.two_l as usize + 1
    }

    pub fn vector(&self, j: usize, k: usize) -> &[f64] {
        &self.vectors[j * self.side() + k]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// All layers for one atom number, from `l = N/2` downward.
#[derive(Debug, Clone)]
pub struct LayerDecomposition {
    basis: Arc<SymmetricBasis>,
    layers: Vec<LayerBasis>,
}

impl LayerDecomposition {
    pub fn new(basis: Arc<SymmetricBasis>) -> Result<Self> {
        if basis.flavor() != Flavor::MomentumLr {
            return Err(Error::Config("layer decomposition requires the l/r flavor".into()));
        }
        let real = |l: Ladder| -> Result<CsrMatrix<f64>> {
            Ok(build_ladder(l, &basis)?.matrix().map(|z| z.re))
        };
        let j_minus = real(Ladder::JMinus)?;
        let k_minus = real(Ladder::KMinus)?;
        let n = basis.n_atoms();
        let d = basis.len();
        let mut layers: Vec<LayerBasis> = Vec::new();
        let mut two_l = n as u32;
        loop {
            let seed = if two_l == n as u32 {
                let mut s = vec![0.0; d];
                let top = basis
                    .states()
                    .iter()
                    .position(|s| s.0[lr::E_R] == n as u32)
                    .expect("fully excited right-moving state exists");
                s[top] = 1.0;
                s
            } else {
                layer_seed(&basis, &layers, two_l)?
            };
            layers.push(fill_layer(seed, two_l, &j_minus, &k_minus)?);
            if two_l < 2 {
                break;
            }
            two_l -= 2;
        }
        Ok(Self { basis, layers })
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn layers(&self) -> &[LayerBasis] {
        &self.layers
    }

    /// Total number of constructed vectors; equals the basis dimension.
    pub fn count(&self) -> usize {
        self.layers.iter().map(|l| l.vectors.len()).sum()
    }

    /// Reduced layer matrices `M^(l)` of the kept subsystem.
    pub fn layer_matrices(&self, rho: &DensityMatrix, keep: Subsystem) -> Result<Vec<DMatrix<C64>>> {
        if rho.basis().flavor() != Flavor::MomentumLr || rho.basis().len() != self.basis.len() {
            return Err(Error::Shape("density matrix is not on the decomposition basis".into()));
        }
        let d = self.basis.len();
        let rho = rho.matrix();
        let mut out = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let side = layer.side();
            let s = DMatrix::<C64>::from_fn(d, side * side, |r, c| {
                C64::new(layer.vectors[c][r], 0.0)
            });
            let t = s.adjoint() * rho * &s;
            let m = DMatrix::<C64>::from_fn(side, side, |a, b| {
                (0..side)
                    .map(|o| match keep {
                        Subsystem::J => t[(a * side + o, b * side + o)],
                        Subsystem::K => t[(o * side + a, o * side + b)],
                    })
                    .sum()
            });
            out.push(m);
        }
        Ok(out)
    }

    /// `-Σ_l Σ λ ln(λ/d_l)` over the eigenvalues of the layer matrices.
    pub fn algebraic_entropy(&self, rho: &DensityMatrix, keep: Subsystem) -> Result<f64> {
        let n = self.basis.n_atoms();
        let mut s = 0.0;
        for (layer, m) in self.layers.iter().zip(self.layer_matrices(rho, keep)?) {
            let eig = hermitian_eigenvalues(&m);
            if let Some(&min) = eig.iter().find(|&&x| x < -LAYER_NEGATIVE_TOL) {
                return Err(Error::InvalidState(format!(
                    "layer 2l = {} has eigenvalue {min:e}",
                    layer.two_l
                )));
            }
            let d_l = multiplicity(n, layer.two_l)? as f64;
            s += entropy_of(eig, d_l);
        }
        Ok(s)
    }

    /// Entropies, conditional entropies and coherent informations of `rho`.
    pub fn coherent_information(&self, rho: &DensityMatrix) -> Result<EntropyReport> {
        let s_full = vn_entropy(rho.matrix())?;
        let s_j = self.algebraic_entropy(rho, Subsystem::J)?;
        let s_k = self.algebraic_entropy(rho, Subsystem::K)?;
        Ok(EntropyReport { s_full, s_j, s_k })
    }
}

/// Normalized residual of the best `J_z = K_z = l` occupation state against
/// the vectors of earlier layers with the same weights.
fn layer_seed(basis: &SymmetricBasis, layers: &[LayerBasis], two_l: u32) -> Result<Vec<f64>> {
    let n = basis.n_atoms() as u32;
    let half = (n + two_l) / 2;
    let pool: Vec<&[f64]> = layers
        .iter()
        .map(|layer| {
            let step = ((layer.two_l - two_l) / 2) as usize;
            layer.vector(step, step)
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (i, st) in basis.states().iter().enumerate() {
        let excited = st.0[lr::E_L] + st.0[lr::E_R];
        let right = st.0[lr::G_R] + st.0[lr::E_R];
        if excited != half || right != half {
            continue;
        }
        let mut v = vec![0.0; basis.len()];
        v[i] = 1.0;
        for _ in 0..2 {
            for p in &pool {
                let c = dot(p, &v);
                v.iter_mut().zip(p.iter()).for_each(|(x, y)| *x -= c * y);
            }
        }
        let r = dot(&v, &v).sqrt();
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, v));
        }
    }
    match best {
        Some((r, mut v)) if r >= RANK_TOL => {
            normalize(&mut v);
            Ok(v)
        }
        Some((r, _)) => Err(Error::Rank { two_l, residual: r }),
        None => Err(Error::Rank { two_l, residual: 0.0 }),
    }
}

fn fill_layer(
    seed: Vec<f64>,
    two_l: u32,
    j_minus: &CsrMatrix<f64>,
    k_minus: &CsrMatrix<f64>,
) -> Result<LayerBasis> {
    let side = two_l as usize + 1;
    let mut vectors = Vec::with_capacity(side * side);
    let lower = |op: &CsrMatrix<f64>, v: &[f64]| -> Result<Vec<f64>> {
        let mut out = op.mul_vec(v);
        if normalize(&mut out) < LADDER_TOL {
            return Err(Error::RepresentationStructure(format!(
                "ladder annihilated a vector inside layer 2l = {two_l}"
            )));
        }
        Ok(out)
    };
    let mut row_start = seed;
    for j in 0..side {
        let mut s = row_start.clone();
        vectors.push(s.clone());
        for _ in 1..side {
            s = lower(k_minus, &s)?;
            vectors.push(s.clone());
        }
        if j + 1 < side {
            row_start = lower(j_minus, &row_start)?;
        }
    }
    Ok(LayerBasis { two_l, vectors })
}

/// Entropies of a state and of its spin and momentum reductions, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub s_full: f64,
    pub s_j: f64,
    pub s_k: f64,
}

impl EntropyReport {
    /// `S(J|K) = S - S_K`.
    pub fn cond_j_given_k(&self) -> f64 {
        self.s_full - self.s_k
    }

    /// `S(K|J) = S - S_J`.
    pub fn cond_k_given_j(&self) -> f64 {
        self.s_full - self.s_j
    }

    /// `I(J>K) = S_K - S`.
    pub fn i_j_k(&self) -> f64 {
        self.s_k - self.s_full
    }

    /// `I(K>J) = S_J - S`.
    pub fn i_k_j(&self) -> f64 {
        self.s_j - self.s_full
    }
}

/// Convenience wrapper building the decomposition for `rho`'s basis.
pub fn algebraic_entropy(rho: &DensityMatrix, keep: Subsystem) -> Result<f64> {
    LayerDecomposition::new(rho.basis().clone())?.algebraic_entropy(rho, keep)
}

/// Convenience wrapper building the decomposition for `rho`'s basis.
pub fn coherent_information(rho: &DensityMatrix) -> Result<EntropyReport> {
    LayerDecomposition::new(rho.basis().clone())?.coherent_information(rho)
}

/// Number of vectors a complete decomposition must hold.
pub fn expected_count(n_atoms: usize) -> usize {
    tetrahedral(n_atoms)
}
