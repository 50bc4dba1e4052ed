//! Certified weak-L¹ and weak-ℓ¹ quasi-norm computations for a family of
//! piecewise reciprocal functions whose Rademacher averages witness that
//! weak-L¹ has no type 1.

pub mod cli;
pub mod construction;
pub mod error;
pub mod numeric;
pub mod pwfunc;
pub mod seqspace;
pub mod typeprobe;

pub use error::{Error, Result};
pub use numeric::{RatInterval, Rational};
