#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::basis::{Flavor, OccupationState, SymmetricBasis};
use crate::blocks::SectorLayout;
use crate::math::binomial;
use crate::operators::CollectiveOperator;
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Tolerances used by [`DensityMatrix::validate`] and [`BlockDensity::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Dense state on a symmetric basis, including all inter-sector coherences.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis: Arc<SymmetricBasis>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(basis: Arc<SymmetricBasis>, matrix: DMatrix<C64>) -> Result<Self> {
        let d = basis.len();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Shape(format!(
                "density matrix {}x{} on a basis of dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { basis, matrix })
    }

    /// `|ψ><ψ|` for a normalized `ψ`.
    pub fn pure(basis: Arc<SymmetricBasis>, psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("state norm² is {norm}")));
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        let m = &v * v.adjoint();
        Self::new(basis, m)
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermitize(&mut self) {
        let adj = self.matrix.adjoint();
        self.matrix = (&self.matrix + adj) * C64::new(0.5, 0.0);
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Check Hermiticity, unit trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `Tr[A ρ]`.
    pub fn expectation(&self, op: &CollectiveOperator) -> Result<C64> {
        if **op.basis() != *self.basis {
            return Err(Error::Shape(format!("`{}` is on a different basis", op.label())));
        }
        Ok(trace_product(op.matrix(), &self.matrix))
    }
}

/// Largest entry modulus.
pub fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `Tr[A ρ] = Σ_ij A_ij ρ_ji`.
pub fn trace_product(a: &CsrMatrix<C64>, rho: &DMatrix<C64>) -> C64 {
    a.triplets().map(|(i, j, v)| v * rho[(j, i)]).sum()
}

/// Sector weights `c_ℓ` and normalized per-sector states.
#[derive(Debug, Clone)]
pub struct BlockDensity {
    n_atoms: usize,
    weights: Vec<f64>,
    blocks: Vec<CsrMatrix<C64>>,
}

impl BlockDensity {
    pub fn new(n_atoms: usize, weights: Vec<f64>, blocks: Vec<CsrMatrix<C64>>) -> Result<Self> {
        if weights.len() != n_atoms + 1 || blocks.len() != n_atoms + 1 {
            return Err(Error::Shape(format!(
                "expected {} sectors, got {} weights and {} blocks",
                n_atoms + 1,
                weights.len(),
                blocks.len()
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("sector weights sum to {total}")));
        }
        for (l, (w, b)) in weights.iter().zip(&blocks).enumerate() {
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative weight {w} in sector {l}")));
            }
            let d = (n_atoms - l + 1) * (l + 1);
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Shape(format!("sector {l} block has the wrong size")));
            }
            let tr: C64 = (0..d).map(|i| b.get(i, i)).sum();
            if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
                return Err(Error::InvalidState(format!("sector {l} block has trace {tr}")));
            }
            let herm = b.max_abs_diff(&b.adjoint())?;
            if herm > HERMITIAN_TOL {
                return Err(Error::InvalidState(format!("sector {l} block not Hermitian")));
            }
        }
        Ok(Self {
            n_atoms,
            weights,
            blocks,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn blocks(&self) -> &[CsrMatrix<C64>] {
        &self.blocks
    }

    pub fn block(&self, l: usize) -> &CsrMatrix<C64> {
        &self.blocks[l]
    }

    /// `⊕_ℓ c_ℓ ρ_ℓ` on the `±` flavor basis (no inter-sector coherences).
    pub fn to_dense(&self, basis: &Arc<SymmetricBasis>) -> Result<DensityMatrix> {
        if basis.n_atoms() != self.n_atoms {
            return Err(Error::Shape("basis does not match block density".into()));
        }
        let layout = SectorLayout::new(basis)?;
        let d = basis.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (l, b) in self.blocks.iter().enumerate() {
            let idx = layout.sector(l);
            let w = C64::new(self.weights[l], 0.0);
            for (r, c, v) in b.triplets() {
                m[(idx[r], idx[c])] = w * v;
            }
        }
        DensityMatrix::new(basis.clone(), m)
    }
}

/// Which representation [`initial_state`] should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Dense state on the `l/r` flavor basis.
    FullLr,
    /// Sector weights plus per-sector seeds.
    Blocks,
}

#[derive(Debug, Clone)]
pub enum InitialState {
    Full(DensityMatrix),
    Blocks(BlockDensity),
}

/// Local index, within sector `ℓ`, of the all-ground seed `(N-ℓ, ℓ, 0, 0)`.
pub fn seed_position(layout: &SectorLayout, basis: &SymmetricBasis, l: usize) -> usize {
    let n = basis.n_atoms() as u32;
    let idx = basis
        .index_of(&OccupationState([n - l as u32, l as u32, 0, 0]))
        .expect("seed state exists");
    layout.position(idx).1
}

/// Sector weights of the all-`|g,l>` product state: `c_ℓ = C(N,ℓ)/2^N`.
pub fn initial_weights(n_atoms: usize) -> Vec<f64> {
    let scale = 2f64.powi(-(n_atoms as i32));
    (0..=n_atoms)
        .map(|l| binomial(n_atoms as u64, l as u64) * scale)
        .collect()
}

/// All atoms in `|g,l>`, either as a dense `l/r` state or in sector form.
pub fn initial_state(n_atoms: usize, repr: Representation) -> Result<InitialState> {
    match repr {
        Representation::FullLr => {
            let basis = Arc::new(SymmetricBasis::new(n_atoms, Flavor::MomentumLr)?);
            let d = basis.len();
            let mut m = DMatrix::<C64>::zeros(d, d);
            m[(0, 0)] = C64::new(1.0, 0.0);
            Ok(InitialState::Full(DensityMatrix::new(basis, m)?))
        }
        Representation::Blocks => {
            let basis = SymmetricBasis::new(n_atoms, Flavor::MomentumPm)?;
            let layout = SectorLayout::new(&basis)?;
            let blocks = (0..=n_atoms)
                .map(|l| {
                    let d = layout.sector_size(l);
                    let s = seed_position(&layout, &basis, l);
                    CsrMatrix::from_triplets(d, d, [(s, s, C64::new(1.0, 0.0))])
                })
                .collect();
            Ok(InitialState::Blocks(BlockDensity::new(
                n_atoms,
                initial_weights(n_atoms),
                blocks,
            )?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::basis_rotation;

    #[test]
    fn weights_n4_and_n1() {
        let w = initial_weights(4);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|x| x / 16.0);
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-16);
        }
        assert_eq!(initial_weights(1), alloc::vec![0.5, 0.5]);
    }

    #[test]
    fn full_initial_state_is_pure() {
        for n in [1usize, 3, 6] {
            let InitialState::Full(rho) = initial_state(n, Representation::FullLr).unwrap() else {
                panic!()
            };
            assert!((rho.purity() - 1.0).abs() < 1e-15);
            rho.validate().unwrap();
        }
    }

    #[test]
    fn block_form_matches_rotated_full_form_on_the_diagonal() {
        let n = 5;
        let InitialState::Full(full) = initial_state(n, Representation::FullLr).unwrap() else {
            panic!()
        };
        let InitialState::Blocks(bd) = initial_state(n, Representation::Blocks).unwrap() else {
            panic!()
        };
        let rot = basis_rotation(n).unwrap();
        let pm = rot.dense_to_pm(full.matrix());
        let blocks = bd.to_dense(rot.pm_basis()).unwrap();
        let layout = SectorLayout::new(rot.pm_basis()).unwrap();
        for i in 0..pm.nrows() {
            for j in 0..pm.ncols() {
                if layout.position(i).0 == layout.position(j).0 {
                    assert!((pm[(i, j)] - blocks.matrix()[(i, j)]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn block_density_validation() {
        let b = CsrMatrix::from_triplets(2, 2, [(0, 0, C64::new(1.0, 0.0))]);
        let b2 = CsrMatrix::from_triplets(2, 2, [(1, 1, C64::new(1.0, 0.0))]);
        assert!(BlockDensity::new(1, alloc::vec![0.5, 0.5], alloc::vec![b.clone(), b2.clone()]).is_ok());
        assert!(BlockDensity::new(1, alloc::vec![0.6, 0.5], alloc::vec![b.clone(), b2.clone()]).is_err());
        let bad = CsrMatrix::from_triplets(2, 2, [(0, 0, C64::new(0.5, 0.0))]);
        assert!(BlockDensity::new(1, alloc::vec![0.5, 0.5], alloc::vec![bad, b2]).is_err());
    }

    #[test]
    fn validate_rejects_bad_states() {
        let basis = Arc::new(SymmetricBasis::new(1, Flavor::MomentumLr).unwrap());
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = C64::new(1.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        let rho = DensityMatrix::new(basis, m).unwrap();
        assert!(matches!(rho.validate(), Err(Error::InvalidState(_))));
    }
}
