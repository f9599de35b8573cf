//! Numerical moving-frame calculus for surfaces embedded in three-dimensional
//! Riemannian manifolds: adapted orthonormal frames, connection and curvature
//! forms, vector-field extensions into the tubular neighborhood, and
//! tightly-toleranced verification of the decomposition of the ambient
//! Bochner Laplacian into tangential and normal parts.
//!
//! Derivatives everywhere come from truncated-Taylor (jet) arithmetic rather
//! than finite differences; the identities under test involve third
//! derivatives of composed maps, where difference quotients would not reach
//! the residual budgets.

// Indexed loops mirror the tensor notation throughout; iterator rewrites
// would obscure which slot is contracted.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod checks;
pub mod config;
pub mod decomposition;
pub mod error;
pub mod expr;
pub mod extension;
pub mod fields;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod ode;
pub mod operators;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
