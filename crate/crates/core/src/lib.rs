//! Exact symbolic variational calculus on jet prolongations of fibered
//! manifolds.

pub mod dsl;
pub mod error;
pub mod forms;
pub mod models;
pub mod kernel;
pub mod symmetry;
pub mod variational;

pub use error::{Error, Result};
