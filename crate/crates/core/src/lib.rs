//! Simulation and classification lab for binary classification of
//! Gaussian white-noise trajectories.

// `!(x > 0.0)` guards deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifiers;
pub mod config;
pub mod error;
pub mod experiments;
pub mod lowerbound;
pub mod model;
pub mod risk;
pub mod rng;
pub mod stats;
pub mod trajectory;

pub use error::{Error, Result};
