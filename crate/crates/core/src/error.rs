use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set where the operation is defined.
    #[error("{what} is out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// The integrand returned a non-finite value inside the interval.
    #[error("integrand is not finite at x = {at}")]
    IntegrandDomain { at: f64 },

    /// An iterative method stopped before reaching its tolerance.
    #[error("{what} did not converge (best estimate {estimate}, error {error})")]
    Convergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },

    /// The Gelfand problem has no solution for this λ.
    #[error("no solution for lambda = {lambda} (fold at {lambda_star})")]
    NoSolution { lambda: f64, lambda_star: f64 },

    /// A root could not be bracketed.
    #[error("{what}: no sign change found")]
    Bracket { what: &'static str },

    /// The adaptive integrator shrank its step below resolution.
    #[error("step size underflow at s = {at}")]
    StepUnderflow { at: f64 },

    /// A sampled value was NaN or infinite.
    #[error("non-finite sample at {at}")]
    NonFinite { at: f64 },

    /// Arguments are individually valid but do not fit together.
    #[error("invalid argument: {0}")]
    Argument(&'static str),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
