//! Positional statistics of 1324-avoiding permutations.
//!
//! A permutation avoiding 1324 that does not start with its maximum `n` is
//! classified by `a`, the smallest value left of `n`, and `k`, the distance
//! from `a` to `n`. This crate enumerates those classes exactly, implements
//! the primitive factorization of the `a = 1` classes, the domino bijection
//! for primitives, the one-insertion and marked-tuple constructions for
//! `a = 2`, and checks the resulting generating-function identities with
//! exact rational arithmetic against brute-force counts.
//!
//! The power-series layer is generic over the coefficient ring
//! ([`series::Coefficient`]); the generating-function code works over the
//! exact rationals aliased here.

pub mod avoiders;
pub mod domino;
pub mod genfun;
pub mod perm;
pub mod primitive;
pub mod series;
pub mod verify;

pub use avoiders::{classify, ClassCountTable, CountCache, CountOracle, PositionalClass};
pub use domino::GriddedDomino;
pub use perm::{Permutation, Word};
pub use primitive::{MarkedTuple, PrimitiveDecomposition};

/// Exact rational scalar used by every generating function.
pub type Rational = num_rational::BigRational;
/// Exact count of permutations.
pub type Count = num_bigint::BigUint;
/// Truncated series in `x` over [`Rational`].
pub type Series = series::TruncatedSeries<Rational>;
/// Truncated series in `(x, t)` over [`Rational`].
pub type BiSeries = series::BivariateSeries<Rational>;
