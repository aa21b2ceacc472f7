//! Exact linear algebra over the rationals: ranks, null spaces and products of
//! sparse matrices. No floating point is used anywhere.

mod matrix;
mod rational;

pub use matrix::{QMatrix, SparseVec};
pub use rational::{ParseRationalError, Rational};
