//! Exact, finite models of a dynamical system and its two natural lifts:
//! the hyperspace of compact subsets under the Hausdorff metric, and the
//! space of grid-quantized fuzzy sets under the levelwise metric with the
//! Zadeh extension (and its `g`-fuzzifications) acting on it.
//!
//! Every distance is an exact rational and every dynamical quantifier over
//! a finite backend is exhausted, so verdicts are exact unless they say
//! otherwise (see [`analysis::Exactness`]).

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod families;
pub mod fuzzy;
pub mod hyperspace;
pub mod rational;
pub mod spaces;

pub use bounds::Bounds;
pub use error::{Error, Result};
pub use rational::Rational;

/// Subset of the points of a space, indexed by point number.
pub type PointSet = fixedbitset::FixedBitSet;
