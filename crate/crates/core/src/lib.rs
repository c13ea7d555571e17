//! Exact symbolic engine for quantum reference frame transformations with
//! two deformation parameters, their classical and Galilean limits, the
//! extended Poincare algebra and Gaussian-state invariance checks.

pub mod canon;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod gaussian;
pub mod lie;
pub mod limits;
pub mod linalg;
pub mod poincare;
pub mod qrf;
pub mod scalar;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::{Scalar, Symbol};
