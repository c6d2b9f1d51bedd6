//! Quadrature for integrands with an inverse-square-root endpoint
//! singularity, and the special functions the closed-form norms need.

pub(crate) mod special;
mod tanh_sinh;

pub use self::special::{beta, l_p, ln_beta, ln_gamma};
pub use self::tanh_sinh::{
    integrate, integrate_endpoint_singular, integrate_endpoint_singular_with_complement,
    DEFAULT_REL_TOL, MAX_EVALUATIONS,
};

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, the difference of the last two refinement levels.
    pub error_estimate: f64,
    pub evaluations: usize,
}
