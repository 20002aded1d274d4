//! Sparse multivariate polynomials over exact scalars.

mod compose;
mod laurent;
mod monomial;
mod parse;
mod polynomial;

pub use compose::{compose, compose_into, CompositionTarget};
pub use laurent::LaurentAtX0;
pub use monomial::{Exponents, Monomial};
pub use parse::{parse_polynomial, ParseError};
pub use polynomial::{IntoRatio, Polynomial};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("leading coefficient is not a unit constant")]
    NonUnitLeadingCoefficient,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("component of degree {degree} cannot reach degree {target} in steps of {step}")]
    DegreeMismatch { degree: u32, target: u32, step: u32 },
}
