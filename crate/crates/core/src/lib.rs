//! Bergman kernels, Berezin transforms and absolute Bergman projections on
//! model domains in ℂⁿ, with the numerics to test boundedness claims.

pub mod acceptance;
pub mod berezin;
pub mod cli;
pub mod domains;
pub mod error;
pub mod hartogs;
pub mod opnorm;
pub mod point;
pub mod quadrature;

pub use error::{Error, Result};
pub use point::CPoint;
