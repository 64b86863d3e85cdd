//! Kicked Heisenberg XXZ ring in the one- and two-flip sectors.

// `!(x > 0.0)` is used on purpose so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop, clippy::wrong_self_convention)]

pub mod bessel;
pub mod bethe;
pub mod chain;
pub mod chebyshev;
pub mod error;
pub mod experiment;
pub mod fermion;
pub mod floquet;
pub mod momentum;
pub mod observables;
pub mod rotor;

pub use error::{Error, Result};
