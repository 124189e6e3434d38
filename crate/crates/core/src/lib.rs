//! Exact generation and certification of polynomial triangles.
//!
//! * [`poly`]: sparse multivariate polynomials with big-integer coefficients.
//! * [`triangle`]: the Eulerian, reversed Stirling, four-, six-parameter and
//!   sequence recurrences, plus the alternate recurrences.
//! * [`partition`]: set partitions and their weighted generating polynomials.
//! * [`network`]: the planar networks `D` and `D'`, path matrices and
//!   nonintersecting path families.
//! * [`bijection`]: words of `D'` paths and their correspondence with set
//!   partitions.
//! * [`tpcheck`]: exhaustive, resumable coefficientwise total-positivity checks.

pub mod bijection;
pub mod error;
pub mod network;
pub mod partition;
pub mod poly;
pub mod tpcheck;
pub mod triangle;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Scalar, Symbol, VarId, VariableTable};
pub use triangle::Triangle;
