//! Exact computation of Heegaard Floer d-invariants of lens spaces, and the
//! homology cobordism classification they decide.
//!
//! The library computes the d-invariant of `L(p, q)` at every spin-c label by
//! an exact Euclidean-style recursion, builds the renormalized relative
//! invariant `f(s, n)`, decides oriented homeomorphism and d-function
//! equivalence of same-`p` pairs by exhaustive torsor-isomorphism search, and
//! machine-verifies the supporting identities over finite sweeps. All
//! arithmetic is exact: rationals are arbitrary precision fractions and every
//! check is an equality, never a tolerance.
//!
//! The `lensd` binary exposes the tables, the classifier, and the
//! verification sweeps with deterministic plain, JSON, and CSV output.

pub mod classify;
pub mod cli;
pub mod dinvariants;
pub mod lemma_oracles;
pub mod modarith;
pub mod relative;
pub mod residues;

pub use modarith::Rational;

/// Errors reported by the library. Internal consistency failures (for
/// example a non-integral relative invariant) are panics, not errors: they
/// cannot occur for valid inputs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{value} is not invertible modulo {modulus}")]
    NotCoprime { value: i64, modulus: u64 },
    #[error("{p} is not an odd prime")]
    NotOddPrime { p: u64 },
    #[error("lens space requires 0 < q < p (got p={p}, q={q})")]
    LensRange { p: u64, q: u64 },
    #[error("p and q must be coprime (got p={p}, q={q})")]
    LensNotCoprime { p: u64, q: u64 },
    #[error("p={p} is too large (labels must fit machine arithmetic)")]
    LensTooLarge { p: u64 },
    #[error("{label} is not a spin structure of L({p},{q})")]
    NotSpinStructure { label: u64, p: u64, q: u64 },
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: i64, modulus: u64 },
    #[error("spaces must share the same p (got {left} and {right})")]
    ModulusMismatch { left: u64, right: u64 },
}
