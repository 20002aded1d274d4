//! Exact computer algebra for hypersurfaces, their complements, and point counts.

pub mod finite_field;
pub mod groth_ring;
pub mod iso_engine;
pub mod poly;
pub mod quadrics;
pub mod report;
pub mod scalar;
pub mod varieties;

pub use finite_field::{FieldElement, FieldSpec};
pub use poly::{parse_polynomial, LaurentAtX0, Monomial, Polynomial};
pub use scalar::{Fp, Rational, Scalar};

pub type RationalPolynomial = Polynomial<Rational>;
pub type IntegerPolynomial = Polynomial<num_bigint::BigInt>;
