//! Poisson brackets for coupled matter and electromagnetic fields.
//!
//! Every bracket is a bivector application `x_dot = L(x) dH`, from which both
//! the bracket value `{F,H} = <dF, L dH>` and the evolution equations follow.

pub mod brackets;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod functional;
pub mod grid;
pub mod liealg;
pub mod ocrr;
pub mod reduction;
pub mod state;

pub use error::{Error, Result};
