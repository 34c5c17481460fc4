//! Exact computations around lifting weakly ramified group actions on k[[y]]
//! to characteristic zero: coefficient rings, truncated series, Möbius
//! transformations, Chebyshev identities, explicit versal families,
//! obstruction searches and the global classification.

pub mod chebyshev;
pub mod classify;
pub mod deformation;
pub mod error;
pub mod json;
mod linalg;
pub mod mobius;
pub mod obstruction;
pub mod rings;
pub mod series;

pub use error::{Error, Result};
pub use mobius::MobiusElem;
pub use rings::{Elem, Relation, Ring, RingDescriptor};
pub use series::{RamificationBreak, TruncatedSeries};
