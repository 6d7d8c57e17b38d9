pub mod analytic;
pub mod bounds;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod hermitian;
pub mod io;
pub mod sampling;
pub mod solver;
pub mod support;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
