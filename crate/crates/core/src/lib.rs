//! Exact construction and verification of vertex Leibniz algebras.
//!
//! The engine builds the vertex Leibniz algebra `V_g` attached to a
//! finite-dimensional Leibniz algebra `g`, its formal translation extension
//! `C[D] ⊗ V_g` and skew-symmetry defect ideal, and checks the vertex algebra
//! identities coefficient by coefficient on graded truncations. All arithmetic
//! is exact over `Q`.

pub mod error;
pub mod exactlin;
pub mod formal;
pub mod leibniz;
pub mod loopmod;
pub mod parallel;
pub mod report;
pub mod verify;
pub mod vertex;

pub use error::{Result, VlaError};
