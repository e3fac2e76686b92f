//! Two-player zero-sum games whose strategy sets are bases of convex cones,
//! solved through primal-dual conic programming, together with diagnostics
//! that read strict feasibility and duality gaps of a conic pair off the
//! associated game.
//!
//! The crate is organized bottom up:
//!
//! - [`cones`]: orthant and semidefinite blocks, products, packed symmetric
//!   coordinates, membership and interior tests.
//! - [`operators`]: dense linear maps between the two coordinate spaces.
//! - [`programs`]: primal-dual pair data and certificate checks.
//! - [`solver`]: a homogeneous self-dual interior-point method for the
//!   standard conic form, with infeasibility certificates.
//! - [`game`]: cone-base games, payoffs, closed-form best responses, and
//!   equilibrium verification.
//! - [`reduction`]: the game-to-pair reduction, value recovery, and the
//!   shift that keeps intermediate programs well behaved.
//! - [`diagnosis`]: strict-feasibility probes and gap classification of a
//!   pair driven by the associated game.
//! - [`instances`]: matrix, semidefinite, and polynomial game families.
//! - [`fileio`]: the canonical on-disk record for games and pairs.

pub mod cones;
pub mod diagnosis;
pub mod cli;
pub mod error;
pub mod fileio;
pub mod game;
pub mod instances;
mod linalg;
pub mod operators;
pub mod programs;
pub mod reduction;
pub mod solver;

#[cfg(test)]
pub(crate) mod testutil;

pub use cones::{smat, svec, ConeBlock, ConeProduct, Point};
pub use error::{Error, Result};
pub use operators::LinOp;
pub use programs::ConicPair;
