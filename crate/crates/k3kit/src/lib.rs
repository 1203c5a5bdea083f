//! Exact arithmetic, lattice computations, and GIT stability tooling for
//! moduli of low degree K3 surfaces.
//!
//! The crate has five areas:
//!
//! * [`arith`]: Jacobi symbols, quadratic Gauss sums, exact rationals.
//! * [`nl_rank`]: rank of the span of Heegner divisors by two independent
//!   formulas that must agree.
//! * [`lattice`]: the rank-21 period lattice, its discriminant group, and
//!   canonical primitive vectors.
//! * [`git_cubic`]: one-parameter-subgroup weights on the space of cubic
//!   sections of a quadric cone in P^4, with destabilizing chamber tables.
//! * [`git_net`]: weights and echelon leading terms for nets of quadrics in
//!   P^5, with the admissible chamber search.

pub mod arith;
pub mod git_cubic;
pub mod git_net;
pub mod lattice;
pub mod nl_rank;

/// Every numerical tolerance used by this crate, pinned in one place.
///
/// Everything downstream of the Gauss sums carries >= 64 mantissa bits, so
/// these bounds are loose by many orders of magnitude; they exist to make
/// the acceptance checks explicit, not to absorb real error.
pub mod tolerances {
    /// Allowed gap between the exact Jacobi-symbol rank and the Gauss-sum
    /// evaluation of the same degree.
    pub const RANK_CROSS_FORMULA: f64 = 1e-6;
    /// Allowed gap when checking |G(a,b)| against the classical magnitude
    /// law sqrt(b) / 0 / sqrt(2b).
    pub const GAUSS_MAGNITUDE: f64 = 1e-9;
}

use serde::Serializer;

/// Serialize an exact rational as its canonical "p/q" string (integers
/// print without the denominator).
pub fn serialize_rational<S: Serializer>(q: &arith::Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}
