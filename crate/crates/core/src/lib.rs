//! Inc(N)-equivariant Gröbner bases and symmetric toric kernels.

mod dense;
pub mod engine;
pub mod order;
pub mod poly;
pub mod scalar;
pub mod spair;
pub mod symmetry;
pub mod toric;

pub use num_rational::{BigRational, Ratio};

/// Exact arbitrary-precision rationals.
pub type Rational = BigRational;
/// Rationals with machine-word parts, for small examples.
pub type SmallRational = Ratio<i64>;
/// Polynomials over exact rationals.
pub type Poly = poly::Polynomial<Rational>;
