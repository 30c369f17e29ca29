//! Projection inequalities for entropy, lattice point sets and sumsets.
//!
//! Set families over `[n]` live in [`set_families`]; entropies of finite
//! joint distributions in [`entropy`]; finite subsets of `Z^n` in [`lattice`];
//! sumsets in abelian and non-abelian groups in [`sumsets`]; and the linear
//! feasibility machinery behind the box constants in [`certificates`].

pub mod certificates;
pub mod entropy;
pub mod error;
pub mod groups;
pub mod io;
pub mod lattice;
pub mod report;
pub mod search;
pub mod set_families;
pub mod sumsets;

pub use error::{Error, Result};
pub use report::{EntropyReport, ExactReport, Verdict, DEFAULT_TOL};
pub use set_families::{SetFamily, SubsetMask};

/// Exact probabilities and linear-program coefficients.
pub type Rational = num_rational::BigRational;

/// Entropies, measured in bits.
pub type Bits = f64;

pub use certificates::{ExactSystem, LogSystem};
