//! Slowly decaying oscillatory integrals on (0, inf) computed as the boundary
//! value of their Fourier-Laplace transform.

pub mod bessel;
pub mod catalog;
pub mod continued_fraction;
pub mod defining_function;
pub mod error;
pub mod euler;
pub mod mp;
pub mod pipeline;
pub mod quadrature;

pub use error::{Error, Result};
pub use mp::{BigComplex, BigReal, PrecisionContext};
