#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod checks;
pub mod error;
pub mod exec;
pub mod greens;
pub mod oracle;
pub mod quadrature;
mod scaled;
pub mod stress;

pub use error::{Error, Result};
pub use exec::Execution;
