//! Numerical companion for shifted moments of smoothed divisor-type
//! Dirichlet polynomials.

pub mod arithmetic;
pub mod error;
pub mod main_term;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod smoothing;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
