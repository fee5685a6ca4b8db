//! Squeezed 3-spheres: order ideals in the poset F3(n), the balls and spheres
//! they span, exact convex realizations with verifiable certificates, and
//! Hamiltonian circuits in their dual graphs.

pub mod complex;
pub mod cyclic;
pub mod error;
pub mod hamiltonian;
pub mod polytope_file;
pub mod poset;
pub mod realization;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational, the scalar used for certified output.
pub type Rational = num_rational::BigRational;
