//! Speaker and listener roles for decentralized teams.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: small dense matrices, eigenvalues, bisection and a pinned RNG.
//! - [`discrete_roles`]: exact speaker/listener policies on finite spaces.
//! - [`linear_roles`]: role allocations for linear feedback teams (stability,
//!   role rotation, noisy listening, KL-optimal speaker variances, LQR gains).
//! - [`potential_field`]: the attractive/repulsive planner used by each agent.
//! - [`table_sim`]: the two-agent table-carrying game.
//! - [`bench`]: paired Monte-Carlo harness over communication strategies.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod discrete_roles;
pub mod error;
pub mod linear_roles;
pub mod numerics;
pub mod potential_field;
pub mod table_sim;

pub use error::{Error, Result};
