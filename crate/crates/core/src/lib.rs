//! Exact computations with log canonical thresholds of bounded coregularity.
//!
//! All arithmetic is over arbitrary-precision rationals. Infinite sets are
//! enumerated under explicit [`setalg::EnumBounds`]; membership queries are
//! decided exactly wherever a finite search suffices.

pub mod cli;
pub mod dualcx;
pub mod error;
pub mod lctsets;
pub mod par;
pub mod rational;
pub mod setalg;
pub mod toric;

pub use error::{Error, Result};
pub use rational::Rational;
