//! Spectral solvers for the radial eigenproblem
//!
//! ```text
//! f'' + f'/y - gamma^2/y^2 f + alpha/y f - y^2 f + W f = 0,   y > 0
//! ```
//!
//! of a Coulomb-plus-oscillator radial operator, computed three ways: exact
//! polynomial (truncated Frobenius) solutions, Rayleigh-Ritz in a Gaussian
//! basis, and the Riccati-Padé method. All arithmetic runs at a configurable
//! binary precision, see [`precision::set_working_precision`].

pub mod error;
pub mod model;
pub mod precision;
pub mod ritz;
pub mod rpm;
pub mod spectra;
pub mod truncation;

pub use error::{Error, Result};
pub use precision::BigReal;
