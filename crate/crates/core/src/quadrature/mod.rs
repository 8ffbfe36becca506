//! Quadrature over the model domains, power-law tails and compensated sums.

mod gauss;
mod io;
mod power;
mod rule;
mod sum;
mod tail;

pub use gauss::{gauss_jacobi, gauss_legendre, gauss_legendre_on};
pub use io::{read_rule, write_rule};
pub use power::integrate_power_law;
pub use rule::{build_rule, build_singular_rule, integrate, integrate_real, GridFunction, QuadratureRule, RuleMeta};
pub use sum::{neumaier_sum, Neumaier, NeumaierComplex};
pub use tail::{tail_exponent_classify, Convergence, Locus, TailExponent};
