//! Exact lattice geometry for connecting toric Fano polytopes by elementary links.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod links;
pub mod pgs;
pub mod polytope;
pub mod web;
pub mod zlattice;

pub use error::{Error, Result};
