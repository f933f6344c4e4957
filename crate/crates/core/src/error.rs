use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("potential pole at r = {r} (q e^(-beta r) = 1)")]
    Pole { r: f64 },

    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("coefficients invalid at E = {energy}: {flag} is not real")]
    InvalidCoefficients { energy: f64, flag: &'static str },

    #[error("no bound state for the requested quantum numbers")]
    NoBoundState,

    #[error("{} roots pass the node-count check: {energies:?}", energies.len())]
    MultipleRoots { energies: Vec<f64> },

    #[error("level is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("m0 c^2 + E = {0} is too small to reconstruct the lower component")]
    DegenerateEnergy(f64),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
