//! Distinguishing a truncated random permutation from a random function.
//!
//! An oracle over `n`-bit strings answers each query with the high `n - m`
//! bits of either a uniform permutation or a uniform function. This crate
//! computes how well `q` queries can tell the two apart:
//!
//! - [`exact`]: exact total variation distance, KL divergence and the
//!   advantage of the one-bit balance test on small instances;
//! - [`bounds`]: closed-form advantage bounds for any `n <= 256`, their
//!   pointwise minimum and the `q_1/2` solver;
//! - [`oracle`], [`distinguish`], [`mc`]: seeded samplers, concrete
//!   distinguishers and a reproducible parallel Monte Carlo harness.

pub mod bounds;
pub mod cli;
pub mod distinguish;
pub mod error;
pub mod exact;
pub mod mc;
pub mod oracle;
pub mod params;
pub mod profile;

pub use error::{Error, Result};
pub use params::{validate_params, ExactRational, LogProb, Params};
