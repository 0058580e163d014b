//! Broken-symmetry invariants of braid closures.
//!
//! The crate builds, for a braid word, the cube of Bott-Samelson bimodules
//! indexed by subsets of its letters, takes Hochschild homology through the
//! Koszul complex vertex by vertex, and computes the homology of the induced
//! cube differential (the `E₂` page). Around that core sit the braid-word
//! move calculus with its grading ledger, the limiting Thom descriptor, and
//! an independent Hecke-algebra HOMFLY oracle used to cross-check Euler
//! characteristics.

pub mod error;
pub mod rootdata;
pub mod braidword;
pub mod cubeposet;
pub mod polyalg;
pub mod linalg;
pub mod laurent;
pub mod soergel;
pub mod hochschild;
pub mod ssq;
pub mod heckeoracle;
pub mod cli;

pub use error::{Error, Result};
