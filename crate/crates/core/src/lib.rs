//! Numerical laboratory for robust vector optimization duality on finite
//! instances: cone orders, weak frontiers, conjugate epigraphs, sectional
//! hulls, LP-certified Farkas statements and primal/dual solvers.

pub mod cones;
pub mod conjugate;
pub mod duality;
pub mod error;
pub mod farkas;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod order;
pub mod scalar;
pub mod sectional;

pub use error::{Error, Result};
