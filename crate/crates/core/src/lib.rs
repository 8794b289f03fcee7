//! Exact slope and instability invariants in positive characteristic.
//!
//! The library computes, entirely in exact rational arithmetic:
//!
//! - ranks and slope decompositions of truncated symmetric powers `T^l(E)`
//!   of a direct sum of semistable pieces, and their instability;
//! - Harder–Narasimhan polygons of slope profiles and their dominance order;
//! - slopes, degrees and instability bounds for Frobenius pushforwards `F_*E`;
//! - rank/degree tables of the sheaves `B^i`, `Z^i` of locally exact and
//!   locally closed forms.
//!
//! Everything is generic over [`Scalar`]; the aliases below fix the default
//! arbitrary-precision instantiation.

pub mod citation;
pub mod error;
pub mod forms;
pub mod frobenius;
pub mod hn;
pub mod json;
pub mod rational;
pub mod scalar;
pub mod truncated;

pub use citation::Citation;
pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
/// 128-bit rational for fast fuzzing on small inputs; panics on overflow.
pub type Rational128 = num_rational::Ratio<i128>;

pub type SlopeProfile = hn::SlopeProfile<Rational>;
pub type Block = hn::Block<Rational>;
pub type HnPolygon = hn::HnPolygon<Rational>;
pub type ProfileStats = hn::ProfileStats<Rational>;
pub type TruncatedDecomposition = truncated::TruncatedDecomposition<Rational>;
pub type VarietyContext = frobenius::VarietyContext<Rational>;
pub type SheafStats = frobenius::SheafStats<Rational>;
pub type BoundReport = frobenius::BoundReport<Rational>;
pub type FormsTable = forms::FormsTable<Rational>;
pub type FormsRow = forms::FormsRow<Rational>;
pub type ZiVerdict = forms::ZiVerdict<Rational>;
