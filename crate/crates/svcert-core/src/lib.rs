//! Exact-arithmetic certification of secant defectiveness, weak
//! defectiveness and tangential weak defectiveness of Segre-Veronese
//! varieties, together with the closed-form identifiability bounds these
//! verdicts cross-check.
//!
//! All linear algebra runs over arbitrary-precision rationals; verdicts are
//! one-sided by semicontinuity: a single exact full-rank (or zero-kernel)
//! sample certifies the generic behavior, while deficient samples are only
//! reported as evidence, never as proofs.

pub mod bounds;
pub mod contact;
pub mod embedding;
mod error;
pub mod exactla;
pub mod multiindex;
pub mod terracini;

pub use embedding::AffinePoint;
pub use error::{Error, Result};
pub use exactla::{ExactMatrix, Span};
pub use multiindex::{Format, MultiIndex, MultiIndexTuple};
