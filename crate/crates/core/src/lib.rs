//! Extremal injectivity radius and systole-of-loops computations for
//! hyperbolic surfaces with geodesic boundary.

// `!(x < tol)` is how NaN gets rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clamp;
pub mod cutlocus;
pub mod error;
pub mod lorentz;
pub mod num17;
pub mod oracle;
pub mod pants;
pub mod polytrig;
pub mod radius_solver;
pub mod roots;
pub mod surface_builder;
pub mod verify;

pub use error::{Error, Result};
