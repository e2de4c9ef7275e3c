//! Exact computation of motivic, p-adic and topological zeta functions
//! attached to cone integrals and to Lie rings of finite rank.
//!
//! The pipeline: a Lie ring over `Z` is turned into a set of valuation
//! conditions on a triangular matrix (`lie`), monomial condition sets become
//! cone integral data (`integral`), the associated rational polyhedral cone
//! is decomposed into open unimodular simplicial pieces (`cone`), and the
//! decomposition is assembled into a closed form for the motivic zeta
//! function as a sum of geometric-series terms over the Grothendieck-ring
//! symbol `L` (`exact`). Specialization at `L = p` yields the p-adic
//! subalgebra zeta function; a structural `L -> 1` limit yields the
//! topological zeta function (`topological`). Everything is cross-checked
//! against brute-force counting oracles (`oracle`).
//!
//! All arithmetic is exact: arbitrary-precision rationals, integer linear
//! algebra, no floating point anywhere.

pub mod cli;
pub mod cone;
pub mod exact;
pub mod integral;
pub mod io;
pub mod lie;
mod linalg;
pub mod oracle;
pub mod reference;
pub mod topological;

use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violated a schema or a structural precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A JSON document did not match the expected shape.
    #[error("schema violation: {0}")]
    Schema(String),
    /// A name not in the built-in example registry.
    #[error("unknown example: {0} (known: {1})")]
    UnknownExample(String, String),
    /// A series expansion hit a factor carrying no power of `T`.
    #[error("series expansion undefined: fraction factor with T-exponent 0 (constant geometric factor {0})")]
    ConstantFraction(String),
    /// A denominator vanished under a numeric specialization.
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    /// A stratum needed by an operation is missing from the resolution data.
    #[error("missing stratum data for I = {0}")]
    MissingStratum(String),
    /// An operation needed a polynomial stratum class but found none.
    #[error("stratum I = {0} has no polynomial class")]
    MissingClass(String),
    /// A symbolic stratum class had no supplied numeric value.
    #[error("no value supplied for symbolic class {0}")]
    UnvaluedSymbol(String),
    /// A point was not in the cone, or no piece of a decomposition took it.
    #[error("point {0} lies outside the cone")]
    OutsideCone(String),
    /// Structural failure that indicates broken invariants, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
