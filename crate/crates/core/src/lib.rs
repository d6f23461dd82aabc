//! Range-equation models for direct-detection, noise, and two-mode-squeezed
//! (QTMS) microwave radars, plus the amplifier-chain photon budget,
//! Gaussian-state covariance tools and Monte-Carlo checks of the
//! correlation detector.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amp_chain;
pub mod direct;
pub mod error;
pub mod gaussian;
pub mod monte_carlo;
pub mod noise;
pub mod physics;
pub mod qtms;
pub mod scenario;

pub use error::{Error, Result};
