//! Exact experiments on integer sets with small doubling.
//!
//! The crate is organised bottom-up: [`sumset`] holds the set type and sumset
//! algebra, [`lemmas`] constructive versions of the covering, injection,
//! 3k-4 and supersaturation lemmas, [`enumerate`] the pruned census of
//! `Lambda(n, k, lambda)`, [`prob`] exact and Monte Carlo tail probabilities,
//! [`constructions`] the lower-bound families, and [`arith`] big binomials,
//! constants and the inequality oracle.

pub mod arith;
pub mod constructions;
pub mod enumerate;
pub mod error;
pub mod lemmas;
pub mod prob;
pub mod ratio;
pub mod sumset;

pub use error::{Error, Result};
