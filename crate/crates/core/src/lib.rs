//! Exponent calculus, spherical functions and spectral-projector kernels on
//! low-rank symmetric spaces, with numerical verification of the scaling laws.

pub mod asymptotics;
pub mod error;
pub mod exponents;
pub mod harness;
pub mod kernels;
pub mod quad;
pub mod spherical;
pub mod rootsys;

pub use error::{Error, Result};
