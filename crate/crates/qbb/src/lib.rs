//! Exact computations for quantum Borcherds-Bozec algebras: the negative
//! half `U_q^-(g)`, irreducible highest weight modules `V(λ)`, their crystal
//! and global bases, abstract crystals, and lower/upper perfect bases.
//!
//! All arithmetic is exact, over `Q` or the rational function field `Q(q)`.

pub mod binf;
pub mod cartan;
pub mod crystal;
pub mod field;
pub mod freealg;
pub mod graphio;
pub mod hwmod;
pub mod lattice;
pub mod linalg;
pub mod perfect;
pub mod poly;
pub mod qrat;
pub mod quotient;
pub mod strings;
pub mod suites;
pub mod uqminus;
pub mod vector;

use num_rational::BigRational;

/// Rationals, the coefficient field of crystal-limit data.
pub type Rat = BigRational;

pub use cartan::{BorcherdsCartanDatum, Composition, GenIndex, RootVector, Weight};
pub use field::Field;
pub use perfect::{QSpace, RatSpace};
pub use qrat::ScalarQ;

#[derive(Clone, Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not regular at q = 0: {0}")]
    NotRegular(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
