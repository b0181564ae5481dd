//! Permutation-symmetric basis of `N` four-level atoms.
//!
//! A symmetric state is labelled by the occupations of four bosonic modes
//! (Schwinger bosons). Mode order is fixed per flavor:
//!
//! | flavor | mode 0 | mode 1 | mode 2 | mode 3 |
//! |--------|--------|--------|--------|--------|
//! | `l/r`  | `g,l`  | `g,r`  | `e,l`  | `e,r`  |
//! | `±`    | `g,-`  | `g,+`  | `e,-`  | `e,+`  |
//!
//! States are listed in descending lexicographic order of `(n0, n1, n2, n3)`,
//! so `(N,0,0,0)` is always index 0.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::tetrahedral;
use crate::{Error, Result};

/// Mode indices in the `l/r` flavor.
pub mod lr {
    pub const G_L: usize = 0;
    pub const G_R: usize = 1;
    pub const E_L: usize = 2;
    pub const E_R: usize = 3;
}

/// Mode indices in the `±` flavor.
pub mod pm {
    pub const G_MINUS: usize = 0;
    pub const G_PLUS: usize = 1;
    pub const E_MINUS: usize = 2;
    pub const E_PLUS: usize = 3;
}

/// Momentum flavor of the single-particle basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `|l>, |r>` momentum eigenstates.
    MomentumLr,
    /// `|±> = (|r> ± |l>)/√2`.
    MomentumPm,
}

/// Occupations of the four modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationState(pub [u32; 4]);

impl OccupationState {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of excited atoms (modes 2 and 3 in both flavors).
    pub fn excitation(&self) -> u32 {
        self.0[2] + self.0[3]
    }

    /// Number of atoms in the second momentum mode of each internal state
    /// (`r` in the `l/r` flavor, `+` in the `±` flavor).
    pub fn second_momentum(&self) -> u32 {
        self.0[1] + self.0[3]
    }
}

/// Validated atom count: `N >= 1`.
pub fn dimension(n_atoms: usize) -> Result<usize> {
    if n_atoms < 1 {
        return Err(Error::Domain("atom count must be at least 1".into()));
    }
    Ok(tetrahedral(n_atoms))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBasis {
    n_atoms: usize,
    flavor: Flavor,
    states: Vec<OccupationState>,
    // (n0, n1, n2) -> index; u32::MAX where unused.
    lookup: Vec<u32>,
}

impl SymmetricBasis {
    /// Enumerate all occupation states with `n0+n1+n2+n3 = N`.
    pub fn new(n_atoms: usize, flavor: Flavor) -> Result<Self> {
        let dim = dimension(n_atoms)?;
        let n = n_atoms as u32;
        let side = n_atoms + 1;
        let mut states = Vec::with_capacity(dim);
        let mut lookup = vec![u32::MAX; side * side * side];
        for n0 in (0..=n).rev() {
            for n1 in (0..=n - n0).rev() {
                for n2 in (0..=n - n0 - n1).rev() {
                    let n3 = n - n0 - n1 - n2;
                    let key = (n0 as usize * side + n1 as usize) * side + n2 as usize;
                    lookup[key] = states.len() as u32;
                    states.push(OccupationState([n0, n1, n2, n3]));
                }
            }
        }
        debug_assert_eq!(states.len(), dim);
        Ok(Self {
            n_atoms,
            flavor,
            states,
            lookup,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> OccupationState {
        self.states[index]
    }

    /// Index of `state`, or `None` if it does not hold exactly `N` atoms.
    pub fn index_of(&self, state: &OccupationState) -> Option<usize> {
        if state.total() as usize != self.n_atoms {
            return None;
        }
        let side = self.n_atoms + 1;
        let [n0, n1, n2, _] = state.0;
        let key = (n0 as usize * side + n1 as usize) * side + n2 as usize;
        match self.lookup[key] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    /// Sector label `ℓ = n(g,+) + n(e,+)`; only meaningful in the `±` flavor.
    pub fn sector_of(&self, index: usize) -> Result<usize> {
        if self.flavor != Flavor::MomentumPm {
            return Err(Error::Config("sector labels require the ± flavor".into()));
        }
        Ok(self.states[index].second_momentum() as usize)
    }

    /// Sector sizes `(N-ℓ+1)(ℓ+1)` for `ℓ = 0..=N`, counted from the basis.
    pub fn sector_sizes(&self) -> Result<Vec<usize>> {
        let mut sizes = vec![0; self.n_atoms + 1];
        for i in 0..self.len() {
            sizes[self.sector_of(i)?] += 1;
        }
        Ok(sizes)
    }
}
