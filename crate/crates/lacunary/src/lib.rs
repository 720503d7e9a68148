//! Exact verification and discovery of lacunary recurrences among
//! Eisenstein series.
//!
//! Everything of substance here happens in exact arithmetic: q-expansions
//! carry `BigRational` coefficients graded by powers of pi^2, so checking a
//! claimed identity reduces to testing that a truncated series is literally
//! zero in every grade.  A small floating-point lattice oracle provides an
//! independent numerical cross-check on the upper half-plane.
//!
//! Module map:
//! - [`exact`]: integers, rationals, binomials, Bernoulli numbers, zeta
//!   ratios, divisor sums, binomial convolution identities.
//! - [`series`]: dense truncated q-series and their pi^2-graded companions.
//! - [`eisenstein`]: normalized Eisenstein q-expansions and the quasimodular
//!   products used by the relation machinery.
//! - [`relations`]: relation vectors between a weight-k series and products
//!   of two lower-weight series; builders for the classical recurrences, an
//!   exhaustive sparsity search, and Bernoulli constant-term extraction.
//! - [`document`]: JSON wire form for relation vectors.
//! - [`lattice`]: floating-point lattice sums for numerical spot checks.

pub mod document;
pub mod eisenstein;
pub mod exact;
pub mod lattice;
pub mod relations;
pub mod series;

/// Errors shared across the library.  Every variant is a precondition or
/// domain failure; computational paths are total once inputs are validated.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An index that must be even (and at least `min`) was not.
    #[error("expected an even index >= {min}, got {got}")]
    BadWeight { got: u64, min: u64 },

    /// A numeric parameter fell outside its documented range.
    #[error("{name} = {got} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        got: i64,
        lo: i64,
        hi: i64,
    },

    /// The Hagen-Rothe sum has a vanishing denominator (a + b*j = 0).
    #[error("vanishing denominator a + b*j = 0 at j = {j}")]
    VanishingDenominator { j: u64 },

    /// A relation spec (r, s, t) whose target weight is too small.
    #[error("relation spec ({r}, {s}, {t}) has weight {k} < 3")]
    BadSpec { r: u64, s: u64, t: u64, k: i64 },

    /// A point that must lie in the open upper half-plane did not.
    #[error("tau must satisfy Im(tau) > 0, got Im(tau) = {0}")]
    NotInUpperHalfPlane(f64),

    /// A numerical tolerance that cannot be met within the cutoff limits.
    #[error("tolerance {tol:e} needs a cutoff near {needed:.0}, beyond the limit {limit}")]
    UnreachableTolerance { tol: f64, needed: f64, limit: u64 },

    /// A serialized relation document that violates the vector invariants.
    #[error("invalid relation document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default q-expansion precision for verifying a weight-`k` relation:
/// comfortably past the Sturm-style bound `k/12 + 1` for level one, with a
/// generous margin for the quasimodular components.
pub fn default_precision(weight: u64) -> usize {
    (weight as usize).max(20)
}
