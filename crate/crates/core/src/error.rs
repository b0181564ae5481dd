use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operator `{label}` couples sectors {from} and {to} (|element| = {magnitude:e})")]
    NotBlockDiagonal {
        label: String,
        from: usize,
        to: usize,
        magnitude: f64,
    },
    #[error("degenerate steady state in sector {sector}: {detail}")]
    DegenerateSteadyState { sector: usize, detail: String },
    #[error("no convergence after {steps} steps (residual {residual:e})")]
    NonConvergence { steps: usize, residual: f64 },
    #[error("solver quality: {0}")]
    SolverQuality(String),
    #[error("undefined photon statistics: {0}")]
    UndefinedStatistics(String),
    #[error("jump triggered with zero total jump probability at t = {time}")]
    ImpossibleJump { time: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("representation structure: {0}")]
    RepresentationStructure(String),
    #[error("Gram-Schmidt rank failure at layer 2l = {two_l} (residual {residual:e})")]
    Rank { two_l: u32, residual: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = core::result::Result<T, Error>;
