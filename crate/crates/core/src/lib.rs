//! Numerical laboratory for gradient Ricci almost solitons on warped products.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod comparison;
pub mod error;
pub mod factory;
pub mod geometry;
pub mod kernel;
pub mod verify;

pub use error::{Error, Result};
