//! Random walks on finite rings with identity.
//!
//! At each step the walk either adds a uniformly random ring element or
//! multiplies by an element drawn from a conjugation-invariant law `Q`. This
//! crate builds the rings, the exact transition matrices, and several
//! independent routes to the spectrum, the stationary law and the mixing
//! behaviour of the walk, including a character-table engine for
//! `GL₂(𝔽_q)` that gives the spectrum on `M₂(𝔽_q)` in closed form.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chain;
pub mod characters;
pub mod field;
pub mod gl2;
pub mod linalg;
pub mod mixing;
pub mod ring;
pub mod spectrum;
pub mod stationary;

/// Exact rational scalars used for every probability.
pub type Rational = num_rational::BigRational;

pub use chain::{AlphaParam, ClassDistribution, MultSide, TransitionMatrix};
pub use ring::{FiniteRing, RingAnalysis};
pub use spectrum::EigenvalueMultiset;

