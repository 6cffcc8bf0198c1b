//! Q-tensor (Beris-Edwards) and director (Ericksen-Leslie) models of nematic
//! liquid crystals on periodic grids.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beris_edwards;
pub mod cli;
pub mod coefficients;
pub mod config;
pub mod ericksen_leslie;
pub mod error;
pub mod fields;
pub mod fluid;
pub mod hilbert;
pub mod qtensor;
pub mod selftest;
pub mod snapshot;

pub use error::{Error, Result};
