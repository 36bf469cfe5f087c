// `!(v > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod experiment;
pub mod indices;
pub mod model;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod stats;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
