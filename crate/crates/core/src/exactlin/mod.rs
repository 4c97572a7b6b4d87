//! Exact rational linear algebra: scalars, sparse vectors and reduced
//! row-echelon subspaces.

mod matrix;
mod rational;
mod sparse;
mod subspace;

use thiserror::Error;

pub use matrix::Matrix;
pub use rational::{factorial, format_rational, int, parse_rational, rat, sign, Rational};
pub use sparse::{Coefficient, SparseVec};
pub use subspace::{intersect, kernel, rref, sum, SubspaceBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("index {index} out of range for ambient dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{0}")]
    Parse(String),
}
