//! Exact computation in automorphism groups of polynomial algebras and free
//! associative algebras.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals or
//! elements of a prime field, and "degree caps" are explicit arguments, never
//! silent truncation.  The main layers are:
//!
//! * [`coeffs`] — scalars over Q or F_p, plus Laurent polynomials in a central
//!   parameter `t` used as a scalar ring for one-parameter diagonal actions;
//! * [`poly`] — sparse commutative and noncommutative polynomials;
//! * [`endo`] — polynomial endomorphisms: composition, jet inversion,
//!   conjugation, the augmentation filtration;
//! * [`word`] / [`synth`] — words in tame generators and synthesis of
//!   elementary automorphisms from a fixed generator set;
//! * [`torus`] — diagonal (torus) actions, conjugation formulas, singularity
//!   valuations, centralizer checks;
//! * [`approx`] — degree-by-degree tame approximation, the "hiking" trick for
//!   killing graded slices, and a few named automorphisms (Nagata);
//! * [`text`] — the canonical text format shared with the CLI.

pub mod approx;
pub mod coeffs;
pub mod endo;
pub mod linalg;
pub mod poly;
pub mod synth;
pub mod text;
pub mod torus;
pub mod word;

use thiserror::Error;

/// Errors shared across the engine.  Every fallible public operation returns
/// one of these; panics are reserved for internal invariant violations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("pole at t = 0 (valuation {0} < 0)")]
    PoleAtZero(i64),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("singular linear part")]
    SingularLinearPart,
    #[error("variable index {0} out of range (n = {1})")]
    VarOutOfRange(usize, usize),
    #[error("constant term must vanish: {0}")]
    ConstantTerm(String),
    #[error("not an elementary map: {0}")]
    NotElementary(String),
    #[error("wrong flavor: {0}")]
    WrongFlavor(String),
    #[error("characteristic 2 is not supported here: {0}")]
    CharTwo(String),
    #[error("field too small: p = {p} but the construction needs {needed}")]
    SmallField { p: u64, needed: String },
    #[error("span deficiency: {0}")]
    SpanDeficiency(String),
    #[error("shape violation: {0}")]
    BadShape(String),
    #[error("height recursion exceeded depth {0}")]
    DepthExceeded(usize),
    #[error("no hiking plan found: {0}")]
    NoPlan(String),
    #[error("parse error at line {line}, col {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
