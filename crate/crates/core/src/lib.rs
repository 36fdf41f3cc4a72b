//! Exact computations with finite quiver representations over Z/n.

#![allow(clippy::needless_range_loop)]

pub mod classifier;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod homology;
pub mod purity;
pub mod quiver;
pub mod rep;
pub mod zn;

pub use error::{Error, Result};
pub use quiver::{Arrow, Path, Quiver};
pub use rep::{RepMorphism, RepSES, Representation};
pub use zn::{FinMod, ModHom, Modulus};
