//! Polynomial sign approximants, two-layer ReLU networks with their
//! linearised pseudo-networks, and adversarial training on the sphere-cap
//! domain `{ ||x|| = 1, x_d = 1/2 }`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod data;
pub mod error;
pub mod harness;
pub mod network;
pub mod poly;
pub mod rng;
pub mod training;

pub use error::{Error, Result};
