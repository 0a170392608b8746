//! Exact geometry-of-numbers kernel.
//!
//! Lattices with algebraic bases, their associated algebras and block-group orbit
//! classes, certified lower bounds for the Mordell constant and continued fraction
//! tools for planar lattices.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod exactmath;
pub mod lattice;
pub mod mordell;
pub mod orbits;
pub mod spectrum2;

pub use error::{Error, Result};
