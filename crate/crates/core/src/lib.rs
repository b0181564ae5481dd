//! Exact simulation of collective, driven-dissipative four-level atomic
//! ensembles in a crossed bad-cavity geometry.
//!
//! The atoms live in the permutation-symmetric (Schwinger boson) subspace of
//! four single-particle states `|g,l>, |g,r>, |e,l>, |e,r>`. Collective pumping
//! `J+` and collective decay `E-` both conserve the number of atoms in the
//! momentum superpositions `|±> = (|r> ± |l>)/√2`, so the Lindblad generator
//! splits into `N+1` independent sectors labelled by `ℓ = N(+)`.
//!
//! The crate is `no_std` (with `alloc`); file formats, the CLI and parallel
//! drivers live in the `superrad` crate.
//!
//! Module map:
//!
//! - [`basis`]: occupation-number basis in the `l/r` and `±` flavors.
//! - [`operators`]: collective one-body operators, SU(2) components, Casimirs.
//! - [`blocks`]: `ℓ`-sector layout and block-diagonal operators.
//! - [`rotation`]: exact lifts of two-mode mixings (flavor change, frame rotation).
//! - [`liouvillian`]: master equation, block and full steady states, time evolution.
//! - [`observables`]: intensities, inversion, Casimirs, `g2(0)`, finite-size fits.
//! - [`mcwf`]: Monte-Carlo wave-function trajectories.
//! - [`qfi`]: quantum Fisher information matrix and the acceleration frame.
//! - [`entropy`]: von Neumann and algebraic (spin/momentum) entanglement entropy.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod basis;
pub mod blocks;
pub mod entropy;
mod error;
pub mod liouvillian;
pub mod math;
pub mod mcwf;
pub mod observables;
pub mod operators;
pub mod qfi;
pub mod rotation;
pub mod sparse;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
