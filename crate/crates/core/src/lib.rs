//! Bound states of a two-term screened exponential potential in the
//! Klein-Gordon and Dirac equations.
//!
//! The crate provides the potential model ([`potential`]), the special
//! functions behind the closed forms ([`specfun`]), the spectrum solver
//! ([`spectrum`]), normalized radial functions ([`wavefunction`]) and an
//! independent shooting solver ([`oracle`]) used to cross-check them.

pub mod error;
pub mod oracle;
pub mod potential;
pub mod specfun;
pub mod spectrum;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};
pub use potential::{Angular, Component, PotentialSpec, QuantumNumbers, UnitSystem};
pub use spectrum::{solve_level, CoefficientSet, DBranch, EnergyLevel, SolverConfig};
pub use wavefunction::{dirac_lower, dirac_pair, dirac_upper, kg_wavefunction, RadialFunction};
