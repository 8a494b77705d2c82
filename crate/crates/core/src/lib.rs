//! Quasi-Monte Carlo point sets from shrunken admissible lattices over
//! F_b((x^{-1})), with exact net verification.

pub mod algebra;
pub mod construction;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod netanalysis;
mod par;
pub mod pointgen;
pub mod quality;

pub use error::{Error, Result};
pub use par::threads;
