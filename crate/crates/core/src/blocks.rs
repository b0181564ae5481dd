//! `ℓ`-sector structure of the `±` flavor basis.
//!
//! Within a sector, states keep the order they have in the full basis.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{Flavor, SymmetricBasis};
use crate::operators::{CollectiveOperator, ZERO_TOL};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Map between full-basis indices and `(ℓ, local)` positions.
#[derive(Debug, Clone)]
pub struct SectorLayout {
    n_atoms: usize,
    sectors: Vec<Vec<usize>>,
    position: Vec<(usize, usize)>,
}

impl SectorLayout {
    pub fn new(basis: &SymmetricBasis) -> Result<Self> {
        let n = basis.n_atoms();
        let mut sectors = vec![Vec::new(); n + 1];
        let mut position = Vec::with_capacity(basis.len());
        for i in 0..basis.len() {
            let l = basis.sector_of(i)?;
            position.push((l, sectors[l].len()));
            sectors[l].push(i);
        }
        Ok(Self {
            n_atoms: n,
            sectors,
            position,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_sectors(&self) -> usize {
        self.sectors.len()
    }

    /// Full-basis indices of sector `l`, in basis order.
    pub fn sector(&self, l: usize) -> &[usize] {
        &self.sectors[l]
    }

    pub fn sector_size(&self, l: usize) -> usize {
        self.sectors[l].len()
    }

    /// `(ℓ, local index)` of a full-basis index.
    pub fn position(&self, index: usize) -> (usize, usize) {
        self.position[index]
    }
}

/// Block-diagonal operator, one block per sector.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    n_atoms: usize,
    blocks: Vec<CsrMatrix<C64>>,
    label: String,
}

impl BlockOperator {
    pub fn new(n_atoms: usize, blocks: Vec<CsrMatrix<C64>>, label: impl Into<String>) -> Result<Self> {
        if blocks.len() != n_atoms + 1 {
            return Err(Error::Shape(format!(
                "{} blocks for {} atoms",
                blocks.len(),
                n_atoms
            )));
        }
        for (l, b) in blocks.iter().enumerate() {
            let d = (n_atoms - l + 1) * (l + 1);
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Shape(format!(
                    "block {l} is {}x{}, expected {d}x{d}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self {
            n_atoms,
            blocks,
            label: label.into(),
        })
    }

    pub fn identity(n_atoms: usize) -> Self {
        let blocks = (0..=n_atoms)
            .map(|l| CsrMatrix::identity((n_atoms - l + 1) * (l + 1)))
            .collect();
        Self {
            n_atoms,
            blocks,
            label: "I".into(),
        }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn blocks(&self) -> &[CsrMatrix<C64>] {
        &self.blocks
    }

    pub fn block(&self, l: usize) -> &CsrMatrix<C64> {
        &self.blocks[l]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_atoms: self.n_atoms,
            blocks: self.blocks.iter().map(CsrMatrix::adjoint).collect(),
            label: format!("({})†", self.label),
        }
    }

    /// Blockwise product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n_atoms != other.n_atoms {
            return Err(Error::Shape("block operators for different N".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.matmul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_atoms: self.n_atoms,
            blocks,
            label: format!("{}·{}", self.label, other.label),
        })
    }

    /// Place the blocks back on the diagonal of the full `±` flavor matrix.
    pub fn assemble(&self, basis: &Arc<SymmetricBasis>) -> Result<CollectiveOperator> {
        if basis.n_atoms() != self.n_atoms {
            return Err(Error::Shape("basis does not match block operator".into()));
        }
        let layout = SectorLayout::new(basis)?;
        let mut triplets = Vec::new();
        for (l, b) in self.blocks.iter().enumerate() {
            let idx = layout.sector(l);
            triplets.extend(b.triplets().map(|(r, c, v)| (idx[r], idx[c], v)));
        }
        let n = basis.len();
        CollectiveOperator::new(
            basis.clone(),
            CsrMatrix::from_triplets(n, n, triplets),
            self.label.clone(),
            false,
        )
    }
}

/// Split a `±` flavor operator into its `ℓ` blocks.
///
/// Fails if any element connecting different sectors exceeds `1e-12`.
pub fn block_decompose(op: &CollectiveOperator) -> Result<BlockOperator> {
    let basis = op.basis();
    if basis.flavor() != Flavor::MomentumPm {
        return Err(Error::Config("block decomposition requires the ± flavor".into()));
    }
    let layout = SectorLayout::new(basis)?;
    let n = basis.n_atoms();
    let mut triplets: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); n + 1];
    for (r, c, v) in op.matrix().triplets() {
        let (lr, ir) = layout.position(r);
        let (lc, ic) = layout.position(c);
        if lr != lc {
            if v.norm() > ZERO_TOL {
                return Err(Error::NotBlockDiagonal {
                    label: op.label().into(),
                    from: lc,
                    to: lr,
                    magnitude: v.norm(),
                });
            }
            continue;
        }
        triplets[lr].push((ir, ic, v));
    }
    let blocks = triplets
        .into_iter()
        .enumerate()
        .map(|(l, t)| {
            let d = layout.sector_size(l);
            CsrMatrix::from_triplets(d, d, t)
        })
        .collect();
    BlockOperator::new(n, blocks, op.label())
}
