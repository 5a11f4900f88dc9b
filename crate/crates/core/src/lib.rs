//! Finite-field certificates of generic identifiability for cubic Chow
//! decompositions.
//!
//! A cubic form in `n + 1` variables has a Chow decomposition of rank `r`
//! if it is a sum of `r` products of three linear forms. This crate checks,
//! over a prime field, that such decompositions are generically unique
//! below the generic rank: it samples random products of linear forms,
//! builds the span of their tangent spaces, picks a random normal vector,
//! and rank-tests the second fundamental form contracted with it. Each run
//! produces a text [`certify::Certificate`] that can be re-verified from
//! its recorded values alone.
//!
//! The [`sff`] module checks the closed-form second fundamental form at the
//! monomial point `x_0 ... x_{d-1}`.

pub mod bench;
pub mod certify;
pub mod chow;
pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod ranks;
pub mod sff;
pub mod sweep;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeModulus, SeededRng};
pub use matrix::{Elimination, FfMatrix, MulStrategy, RrefResult};
pub use poly::{LinearForm, MonomialBasis, Poly};
