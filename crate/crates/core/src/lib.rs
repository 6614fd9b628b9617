//! Optimal two-period saving when one risk component is a fuzzy number and
//! the other a random variable.

// `!(x > 0.0)` style checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fuzzy;
pub mod mixed;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod saving;
pub mod scenario_file;
pub mod stochastic;
pub mod taylor;
pub mod utility;

pub use error::{Error, ErrorCategory, Result};
