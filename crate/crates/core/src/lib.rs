//! Numerical laboratory for the one-dimensional problem -u'' = a(x) f(u)
//! with a sign-changing weight a and a sublinear nonlinearity f.
//!
//! The crate is organized bottom-up: `grid` holds meshes and grid functions,
//! `linalg` the tridiagonal operators and direct solver, `eigen` the weighted
//! principal eigenvalue machinery, `nonlinear` the sub/supersolution bracket,
//! damped Newton, and regularization-path solvers, `classify` the positivity
//! verdicts, and `lab` the reproducible command-line experiments.

pub mod classify;
pub mod coeffs;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod lab;
pub mod linalg;
pub mod nonlinear;

pub use error::{Error, Result};
