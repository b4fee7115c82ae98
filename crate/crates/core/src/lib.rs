//! Affine index invariants of virtual and twisted links given as Gauss codes.

pub mod affine;
pub mod canonical;
pub mod codec;
pub mod cut;
pub mod gauss;
pub mod generate;
pub mod moves;
pub mod poly;
pub mod twisted;

pub use codec::{parse, serialize, ParseError};
pub use gauss::{CodeError, CrossingId, LinkCode, Role, Sign, Token};
pub use poly::LaurentPoly;
