//! The collective master equation `dρ/dt = W D[J+]ρ + Γc D[E-]ρ`.
//!
//! - [`params`]: rate parameters and the cavity-to-rate map.
//! - [`density`]: dense and sector-wise states, the `|g,l>^⊗N` initial state.
//! - [`generator`]: dissipators and the generator acting on dense states.
//! - [`block`]: sector generators and per-sector steady states.
//! - [`full`]: long-time limit of the full state including coherences.
//! - [`evolve`]: adaptive time integration of dense states.

pub mod block;
pub mod density;
pub mod evolve;
pub mod full;
pub mod generator;
pub mod params;
pub mod tridiag;

pub use block::{
    build_block_liouvillian, steady_state_block, steady_state_blocks, BlockModel, BlockSteadyState,
    SteadyStateOptions,
};
pub use density::{initial_state, BlockDensity, DensityMatrix, InitialState, Representation};
pub use evolve::{evolve, EvolveOptions, EvolveResult};
pub use full::{steady_state_full, FullSteadyState};
pub use generator::{dissipator_apply, liouvillian_apply, Generator};
pub use params::{effective_rates, EffectiveRates, ModelParams, PhysicalParams};
