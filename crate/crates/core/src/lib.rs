//! Growth functions of multivalued harmonic maps: the permutation metric on
//! unordered tuples, branched-root and homogeneous examples, quadrature of the
//! L^2 growth, Dirichlet energy and frequency, sign checkers for the
//! monotonicity and convexity statements, and a harmonic reference baseline.

pub mod calculus;
pub mod error;
pub mod growth;
pub mod harmonic_ref;
pub mod multipoint;
pub mod poly;
pub mod qfun;
pub mod quadrature;

pub use error::{Error, Result};
pub use multipoint::QPoint;
pub use qfun::QFunction;
pub mod suites;
