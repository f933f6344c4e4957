//! Special functions used by the closed forms and their verification.

mod gamma;
mod hypergeometric;
mod quadrature;

pub use gamma::{ln_beta, ln_gamma};
pub use hypergeometric::{hyp2f1_derivative, hyp2f1_terminating, TerminatingHypergeometric};
pub use quadrature::{integrate, integrate_panels, GaussLegendre};
