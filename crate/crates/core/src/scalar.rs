//! The coefficient field abstraction shared by exact and float mode.
//!
//! Exact mode works in ℚ(√D) through [`QuadNumber`]; float mode uses
//! [`MpComplex`], a pair of multi-precision binary floats. Operator impls on
//! both types panic on misuse (radicand mismatch, division by zero); callers
//! that must report those conditions check first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::ops::SquareRoot as _;
use dashu_int::ops::Abs as _;

use crate::error::{Error, Result};
use crate::quadfield::QuadNumber;
use crate::rational::{mp_from_f64, mp_to_f64, rational_to_mp, Mp, Rational};

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    /// A rational constant living in the same field (same radicand or precision) as `self`.
    fn from_rational_like(&self, r: &Rational) -> Self;

    /// An exact field element carried into the same field as `self`.
    fn from_quad_like(&self, q: &QuadNumber) -> Self;

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_rational_like(&Rational::from(n))
    }

    fn zero_like(&self) -> Self {
        self.from_i64_like(0)
    }

    fn one_like(&self) -> Self {
        self.from_i64_like(1)
    }

    fn is_zero(&self) -> bool;

    /// Sign of a real value. Float values with a nonzero imaginary part are rejected.
    fn real_sign(&self) -> Result<Ordering>;

    /// `|x|` at `precision` bits.
    fn magnitude(&self, precision: usize) -> Mp;

    /// Nearest `f64` to the real part.
    fn re_f64(&self) -> f64;

    /// Agreement measure used by verification: `0.0` iff equal in exact mode;
    /// `|x − y| / max(1, |y|)` in float mode.
    fn residual(&self, other: &Self) -> f64;

    fn abs_real(&self) -> Result<Self> {
        Ok(match self.real_sign()? {
            Ordering::Less => -self.clone(),
            _ => self.clone(),
        })
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / other.clone())
        }
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for QuadNumber {
    const MODE: Mode = Mode::Exact;

    fn from_rational_like(&self, r: &Rational) -> Self {
        QuadNumber::rational(r.clone(), self.radicand())
    }

    fn from_quad_like(&self, q: &QuadNumber) -> Self {
        q.clone()
    }

    fn is_zero(&self) -> bool {
        QuadNumber::is_zero(self)
    }

    fn real_sign(&self) -> Result<Ordering> {
        Ok(self.sign())
    }

    fn magnitude(&self, precision: usize) -> Mp {
        self.abs().to_mp(precision)
    }

    fn re_f64(&self) -> f64 {
        self.to_f64()
    }

    fn residual(&self, other: &Self) -> f64 {
        if self == other {
            0.0
        } else {
            (self.clone() - other.clone()).to_f64().abs().max(f64::MIN_POSITIVE)
        }
    }

    fn powi(&self, n: u32) -> Self {
        self.pow(n)
    }
}

/// Complex number with multi-precision binary float parts.
#[derive(Clone, PartialEq)]
pub struct MpComplex {
    re: Mp,
    im: Mp,
    precision: usize,
}

impl MpComplex {
    pub fn new(re: Mp, im: Mp, precision: usize) -> Self {
        Self {
            re: re.with_precision(precision).value(),
            im: im.with_precision(precision).value(),
            precision,
        }
    }

    pub fn real(re: Mp, precision: usize) -> Self {
        Self::new(re, Mp::ZERO, precision)
    }

    pub fn from_f64(re: f64, im: f64, precision: usize) -> Self {
        Self::new(mp_from_f64(re, precision), mp_from_f64(im, precision), precision)
    }

    pub fn from_rational(r: &Rational, precision: usize) -> Self {
        Self::real(rational_to_mp(r, precision), precision)
    }

    pub fn from_quad(q: &QuadNumber, precision: usize) -> Self {
        Self::real(q.to_mp(precision), precision)
    }

    /// `e^{iθ}` with θ in radians; the trigonometric values come from `f64`.
    pub fn unit(theta: f64, precision: usize) -> Self {
        let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        Self::from_f64(snap(theta.cos()), snap(theta.sin()), precision)
    }

    pub fn re(&self) -> &Mp {
        &self.re
    }

    pub fn im(&self) -> &Mp {
        &self.im
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_real(&self) -> bool {
        self.im == Mp::ZERO
    }

    pub fn norm_sqr(&self) -> Mp {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (mp_to_f64(&self.re), mp_to_f64(&self.im))
    }
}

impl fmt::Debug for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "MpComplex({re:e}, {im:e}; {} bits)", self.precision)
    }
}

impl fmt::Display for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im == 0.0 {
            write!(f, "{re:.17e}")
        } else if im < 0.0 {
            write!(f, "{re:.17e} - {:.17e}i", -im)
        } else {
            write!(f, "{re:.17e} + {im:.17e}i")
        }
    }
}

impl Add for MpComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        Self::new(self.re + rhs.re, self.im + rhs.im, precision)
    }
}

impl Sub for MpComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        Self::new(self.re - rhs.re, self.im - rhs.im, precision)
    }
}

impl Mul for MpComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        if self.is_real() && rhs.is_real() {
            return Self::real(self.re * rhs.re, precision);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im, precision)
    }
}

impl Div for MpComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        let precision = self.precision.max(rhs.precision);
        if rhs.is_real() {
            return Self::new(&self.re / &rhs.re, &self.im / &rhs.re, precision);
        }
        let den = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        Self::new(re, im, precision)
    }
}

impl Neg for MpComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
            precision: self.precision,
        }
    }
}

impl Scalar for MpComplex {
    const MODE: Mode = Mode::Float;

    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::from_rational(r, self.precision)
    }

    fn from_quad_like(&self, q: &QuadNumber) -> Self {
        Self::from_quad(q, self.precision)
    }

    fn is_zero(&self) -> bool {
        self.re == Mp::ZERO && self.im == Mp::ZERO
    }

    fn real_sign(&self) -> Result<Ordering> {
        if !self.is_real() {
            return Err(Error::Usage(format!("expected a real value, got {self}")));
        }
        Ok(self.re.cmp(&Mp::ZERO))
    }

    fn magnitude(&self, precision: usize) -> Mp {
        if self.is_real() {
            return self.re.clone().with_precision(precision).value().abs();
        }
        self.norm_sqr().with_precision(precision).value().sqrt()
    }

    fn re_f64(&self) -> f64 {
        mp_to_f64(&self.re)
    }

    fn residual(&self, other: &Self) -> f64 {
        let p = self.precision.max(other.precision);
        let diff = (self.clone() - other.clone()).magnitude(p);
        let scale = other.magnitude(p).max(Mp::ONE);
        mp_to_f64(&(diff / scale))
    }
}
