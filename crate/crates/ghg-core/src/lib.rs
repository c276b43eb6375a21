//! Generalised Heisenberg groups and their Schrödinger representations.
//!
//! The crate builds central extensions `H(A, B, C, lambda)` of a direct sum of
//! finite abelian groups by a cyclic group, twisted by a bilinear pairing,
//! realises their Schrödinger representations as explicit unitary matrices,
//! decomposes their automorphism groups through displacement operators,
//! analyses orbits of complex lines (bouquets) via overlap and angle maps, and
//! searches numerically for equiangular and regular bouquets. Groups of
//! arithmetic type are constructed from number-field ideal data with exact
//! integer lattice arithmetic.

pub mod abelian;
pub mod arith;
pub mod autgrp;
pub mod bouquet;
pub mod error;
pub mod field;
pub mod formats;
pub mod ghg;
pub mod intmat;
pub mod linalg;
pub mod schrodinger;
pub mod search;
pub mod selftest;

pub use error::{Error, Result};

/// Default numerical tolerance used by verification routines.
///
/// Override per call where an explicit tolerance parameter exists, or
/// globally through the `GHG_TOLERANCE` environment variable in the CLI.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
