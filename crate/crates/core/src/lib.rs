//! Sample complexity of hierarchical classical-shadow measurement schemes.
//!
//! Two families of randomized measurements are covered:
//!
//! * binary **tree circuits** of two-qudit Haar gates, whose Pauli learning
//!   rates (PLRs) follow from an exact two-replica recursion ([`tree`]);
//! * **holographic random tensor networks** on `{p,q}` hyperbolic tilings
//!   ([`tiling`]), whose PLRs map onto a pinned Ising model ([`ising`]) and,
//!   at large bond dimension, onto a planar minimal-cut problem ([`cut`]).
//!
//! The squared shadow norm of a Pauli operator is the reciprocal of its PLR.
//! [`analysis`] extracts the effective central charge from cut sweeps and
//! evaluates the continuum Poincaré-disk geometry.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cut;
pub mod error;
pub mod ising;
pub mod lambert;
mod maxflow;
pub mod replica;
pub mod tiling;
pub mod tree;

pub use error::{Error, Result};
pub use replica::{ModelParams, PlrResult, Scalar, SupportMask, WVector};
