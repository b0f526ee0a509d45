//! Fractional Gagliardo energies on thin films `Ω_ε = ω × (0, ε)`.
//!
//! The energy `⌊u⌋^p_s(Ω_ε) = ∫∫ |u(x) - u(y)|^p / |x - y|^{d+sp}` is
//! evaluated by a graded deterministic quadrature (d = 2) or an unbiased Monte
//! Carlo estimator (d = 2, 3), and compared along `ε → 0` with the limits of
//! the first scaling `ε^{1-sp}` and of the dimension-reduction regimes.
//!
//! - [`constants`]: `C_{s,d}`, `K_{s,d}` and their `p` analogues, closed form and quadrature.
//! - [`geometry`] and [`testfns`]: films, exponents and the analytic test families.
//! - [`kernelquad`]: the two energy engines and the separable functionals.
//! - [`asymptotics`]: regimes, predicted limits and ε-ladder sweeps.
//! - [`verify`]: the acceptance criteria behind `thinfrac verify`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod config;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod kernelquad;
pub mod plot;
pub mod quad;
pub mod testfns;
pub mod verify;

pub use error::{Error, Result};
