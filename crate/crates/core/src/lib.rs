//! Construction, verification and classification of mutually unbiased bases
//! in dimensions two to five.
//!
//! Discrete matrices use exact arithmetic in the cyclotomic integers; the
//! parametric `d = 4` families use a floating backend generic over [`Real`].

#![allow(clippy::needless_range_loop)]

pub mod assembly;
pub mod classify;
pub mod cyclotomic;
pub mod equivalence;
pub mod error;
pub mod matrices;
pub mod scalar;
pub mod search;
pub mod solvers;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use scalar::Real;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Residual tolerance for floating unbiasedness and orthogonality checks.
pub const TOL: f64 = 1e-9;

pub type CyclotomicInt = Cyclotomic<i64>;
pub type ComplexMatrix64 = matrices::ComplexMatrix<f64>;
pub type ComplexMatrix32 = matrices::ComplexMatrix<f32>;
pub type MonomialMatrix64 = matrices::MonomialMatrix<f64>;
pub type Basis64 = matrices::Basis<f64>;
pub type MuBasisSet64 = matrices::MuBasisSet<f64>;
pub type MuBasisSet32 = matrices::MuBasisSet<f32>;
