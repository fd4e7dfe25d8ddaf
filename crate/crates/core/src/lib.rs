//! κ-Fibonacci numbers, the shell-like generating function
//! `p̃_κ(z) = (1 + τ²z²) / (1 − κτz − τ²z²)`, and executable checks of the
//! initial-coefficient and Fekete–Szegő estimates for four bi-univalent
//! function classes subordinate to `p̃_κ`.
//!
//! Exact computations run in ℚ(√(κ²+4)) via [`QuadNumber`]; float mode uses
//! multi-precision complex numbers ([`MpComplex`]). Most of the crate is
//! generic over [`Scalar`] so the same code path serves both.

pub mod bounds;
pub mod error;
pub mod fibonacci;
pub mod functionals;
pub mod parallel;
pub mod quadfield;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod shelllike;
pub mod verify;

pub use error::{Error, Result};
pub use fibonacci::KappaContext;
pub use quadfield::{QuadNumber, Radicand};
pub use rational::{parse_rational, Mp, Rational};
pub use scalar::{Mode, MpComplex, Scalar};
pub use series::TruncatedSeries;
