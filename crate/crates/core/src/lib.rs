//! Steerable partial differential operators on the plane: exact basis
//! generation, stencil discretization, and equivariance checks.

pub mod basis;
pub mod cli;
pub mod discretize;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
