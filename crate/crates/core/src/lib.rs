// Tolerance checks are written `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod polycore;

pub use error::{Result, SatakeError};
pub mod dataset;
pub mod eliminator;
pub mod golden;
pub mod hecke;
pub mod krieg;
pub mod pipeline;
pub mod rootfind;
