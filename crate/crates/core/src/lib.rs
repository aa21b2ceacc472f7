//! Betti numbers of the image of a simplicial surjection, computed from the
//! cohomology of its fibered powers through the descent double complex.
//!
//! The layers, bottom up:
//!
//! * [`ratlinalg`]: exact sparse rational linear algebra.
//! * [`complexes`]: cochain complexes, morphisms, cohomology dimensions.
//! * [`bicomplex`]: double complexes, total complexes, truncation and the
//!   first two pages of both spectral sequences.
//! * [`simpsets`]: finite simplicial sets, simplicial maps, cochains and
//!   fibered powers.
//! * [`descent`]: the descent double complex and its verifiers.
//! * [`scaffold`]: fibered quadratic systems and assembly from externally
//!   supplied complexes.

pub mod bicomplex;
pub mod complexes;
pub mod descent;
mod error;
pub mod ratlinalg;
pub mod scaffold;
pub mod simpsets;

pub use error::{Error, Result};
