//! Time-map solutions of the one-dimensional Emden problem `-W'' = W^p` and
//! Gelfand problem `-w'' = λ e^w` with zero Dirichlet data, their lifts to
//! radial solutions of weighted elliptic equations on annuli, and the limit
//! profiles those solutions approach as `p → ∞`, `p ↘ 1` or `λ → 0`.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to route
//! float math through the standard library instead of `libm`.
//!
//! Module map:
//! - [`quad`]: tanh–sinh quadrature with exact endpoint complements, `L_p`, Beta.
//! - [`emden`]: peak value, pointwise evaluation and `L^q` norms of `W_p`.
//! - [`gelfand`]: the `λ(μ)` curve, its fold, both branches, `γ_λ`, `δ_λ`.
//! - [`profiles`]: Green's function, Liouville profile, rescalings, sup distances.
//! - [`annulus`]: the five weighted annulus problems and their reductions.
//! - [`oracle`]: Dormand–Prince integrator and shooting solvers used as an
//!   independent check of everything above.
#![no_std]
// Whenever std is linked (tests, dev-dependencies, the `std` feature), inherent
// float methods shadow `num_traits::Float` and its imports look unused.
#![allow(unused_imports)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod annulus;
pub mod emden;
mod error;
pub mod gelfand;
pub mod oracle;
pub mod profiles;
pub mod quad;
mod roots;

pub use crate::annulus::{AnnulusProblem, ProblemKind, RadialSolution, Regime};
pub use crate::emden::{EmdenSolution, Interval};
pub use crate::error::{Error, Result};
pub use crate::gelfand::{BifurcationDiagram, Branch, Fold, GelfandSolution};
pub use crate::profiles::RescaledProfile;
pub use crate::quad::QuadratureResult;
