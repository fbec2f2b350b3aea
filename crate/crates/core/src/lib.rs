//! Foundations of matroids.
//!
//! Pastures with finitely presented unit groups, matroids on small ground
//! sets, and the foundation `F_M` of a matroid computed by a direct
//! presentation, by colimits over diagrams of small embedded minors, and by
//! diagrams of upper sublattices of the lattice of flats.

pub mod abgroup;
pub mod matroid;
pub mod pasture;
pub mod error;
pub mod foundation;
pub mod represent;
pub mod cli;

pub use error::{Error, Result};
