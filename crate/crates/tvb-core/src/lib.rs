//! Exact computational machinery for rainbow Tverberg partitions.
//!
//! The crate is organized around five pieces:
//!
//! * [`complex`] — finite abstract simplicial complexes with tagged vertices:
//!   chessboard complexes, joins, face enumeration, f-vectors.
//! * [`homology`] — simplicial homology over the rationals, prime fields and
//!   the integers (Smith normal form), and homological connectivity.
//! * [`criterion`] — the arithmetic guarantee engine: decides from
//!   `(d, r, color cardinalities)` whether a rainbow Tverberg partition is
//!   guaranteed, via chessboard connectivity and equivariant index bounds.
//! * [`geometry`] — exact rational point configurations and the LP-based
//!   decision procedure for "do these convex hulls share a common point",
//!   with verifiable witnesses.
//! * [`search`] — enumeration of rainbow faces and disjoint face tuples,
//!   Tverberg partition search, and randomized verification campaigns.
//!
//! All arithmetic that feeds a mathematical decision is exact; floating
//! point is not used anywhere.

// indexed loops are the native notation for the matrix and divisibility
// arithmetic in here
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub mod complex;
pub mod criterion;
pub mod geometry;
pub mod homology;
pub mod search;
