//! Exact arithmetic in a quadratic extension ℚ(√D).
//!
//! Every [`QuadNumber`] carries a shared handle to its [`Radicand`]. Values
//! over different radicands never mix: the `checked_*` methods report
//! [`Error::RadicandMismatch`], the operator impls panic. When `D` is the
//! square of a rational the extension collapses to ℚ and the irrational part
//! is folded into the rational one at construction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use dashu_float::ops::SquareRoot as _;
use dashu_int::ops::UnsignedAbs as _;
use dashu_int::{IBig, UBig};

use crate::error::{Error, Result};
use crate::rational::{rational_to_mp, Mp, Rational};

/// The radicand `D > 0` of a quadratic field, with its rational square root
/// when it has one.
#[derive(Debug, PartialEq, Eq)]
pub struct Radicand {
    value: Rational,
    root: Option<Rational>,
}

impl Radicand {
    pub fn new(value: Rational) -> Result<Arc<Self>> {
        if value <= Rational::ZERO {
            return Err(Error::Usage(format!("radicand must be positive, got {value}")));
        }
        let root = rational_sqrt(&value);
        Ok(Arc::new(Self { value, root }))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// `Some(s)` with `s² = D` when `D` is a perfect rational square.
    pub fn rational_root(&self) -> Option<&Rational> {
        self.root.as_ref()
    }

    pub fn is_perfect_square(&self) -> bool {
        self.root.is_some()
    }
}

fn ubig_sqrt_exact(n: &UBig) -> Option<UBig> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if *r < Rational::ZERO {
        return None;
    }
    let num = r.numerator().unsigned_abs();
    let den = r.denominator();
    let sn = ubig_sqrt_exact(&num)?;
    let sd = ubig_sqrt_exact(den)?;
    Some(Rational::from_parts(IBig::from(sn), sd))
}

/// `a + b·√D`.
#[derive(Clone)]
pub struct QuadNumber {
    a: Rational,
    b: Rational,
    radicand: Arc<Radicand>,
}

impl QuadNumber {
    pub fn new(a: Rational, b: Rational, radicand: &Arc<Radicand>) -> Self {
        match &radicand.root {
            Some(root) => Self {
                a: a + b * root,
                b: Rational::ZERO,
                radicand: Arc::clone(radicand),
            },
            None => Self {
                a,
                b,
                radicand: Arc::clone(radicand),
            },
        }
    }

    pub fn rational(a: Rational, radicand: &Arc<Radicand>) -> Self {
        Self {
            a,
            b: Rational::ZERO,
            radicand: Arc::clone(radicand),
        }
    }

    pub fn zero(radicand: &Arc<Radicand>) -> Self {
        Self::rational(Rational::ZERO, radicand)
    }

    pub fn one(radicand: &Arc<Radicand>) -> Self {
        Self::rational(Rational::ONE, radicand)
    }

    /// `√D` itself.
    pub fn sqrt_d(radicand: &Arc<Radicand>) -> Self {
        Self::new(Rational::ZERO, Rational::ONE, radicand)
    }

    /// Rational part.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `√D`.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Arc<Radicand> {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            radicand: Arc::clone(&self.radicand),
        }
    }

    /// Field norm `a² − b²D`, i.e. the product with the conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * &self.radicand.value
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.radicand, &other.radicand) || self.radicand.value == other.radicand.value {
            Ok(())
        } else {
            Err(Error::RadicandMismatch {
                left: self.radicand.value.to_string(),
                right: other.radicand.value.to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            radicand: Arc::clone(&self.radicand),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            radicand: Arc::clone(&self.radicand),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = &self.radicand.value;
        Ok(Self {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &other.a * &self.b,
            radicand: Arc::clone(&self.radicand),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x / y = x·ȳ / N(y); N(y) ≠ 0 because D is not a rational square.
        let n = other.norm();
        let num = self.checked_mul(&other.conjugate())?;
        Ok(Self {
            a: num.a / &n,
            b: num.b / &n,
            radicand: Arc::clone(&self.radicand),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            a: &self.a * k,
            b: &self.b * k,
            radicand: Arc::clone(&self.radicand),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.radicand);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact sign of `a + b√D`, decided by comparing `a²` with `b²D`.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::ZERO);
        let sb = self.b.cmp(&Rational::ZERO);
        match (sa, sb) {
            (_, Ordering::Equal) => sa,
            (Ordering::Equal, _) => sb,
            _ if sa == sb => sa,
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * &self.radicand.value;
                match a2.cmp(&b2d) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Sign as an integer in `{-1, 0, 1}`.
    pub fn signum(&self) -> i8 {
        match self.sign() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Value rounded to `precision` bits (at least 53).
    ///
    /// Evaluated with guard bits; when `a` and `b√D` have opposite signs the
    /// conjugate form `(a² − b²D)/(a − b√D)` is used so no cancellation occurs.
    pub fn to_mp(&self, precision: usize) -> Mp {
        let precision = precision.max(53);
        let work = precision + 64;
        if let Some(root) = &self.radicand.root {
            return rational_to_mp(&(&self.a + &self.b * root), precision);
        }
        if self.b.is_zero() {
            return rational_to_mp(&self.a, precision);
        }
        let sqrt_d = rational_to_mp(&self.radicand.value, work).sqrt();
        let bs = rational_to_mp(&self.b, work) * sqrt_d;
        let a = rational_to_mp(&self.a, work);
        let opposite = !self.a.is_zero() && (self.a < Rational::ZERO) != (self.b < Rational::ZERO);
        let value = if opposite {
            rational_to_mp(&self.norm(), work) / (a - bs)
        } else {
            a + bs
        };
        value.with_precision(precision).value()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_mp(64).to_f64().value()
    }
}

impl PartialEq for QuadNumber {
    fn eq(&self, other: &Self) -> bool {
        self.radicand.value == other.radicand.value && self.a == other.a && self.b == other.b
    }
}

impl Eq for QuadNumber {}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadNumber({self} in Q(sqrt({})))", self.radicand.value)
    }
}

impl fmt::Display for QuadNumber {
    /// `a`, `b√D`, or `a + b√D` / `a - b√D`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.radicand.value;
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = if self.b < Rational::ZERO { -self.b.clone() } else { self.b.clone() };
        // A fractional radicand is parenthesised so `√(17/4)` is not read as `√17 / 4`.
        let root = if d.is_int() { format!("√{d}") } else { format!("√({d})") };
        let surd = if mag == Rational::ONE { root } else { format!("{mag}{root}") };
        match (self.a.is_zero(), self.b < Rational::ZERO) {
            (true, false) => write!(f, "{surd}"),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{} + {surd}", self.a),
            (false, true) => write!(f, "{} - {surd}", self.a),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $trait<QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNumber> for QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: &QuadNumber) -> QuadNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadNumber> for &QuadNumber {
            type Output = QuadNumber;
            fn $method(self, rhs: QuadNumber) -> QuadNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber {
            a: -self.a,
            b: -self.b,
            radicand: self.radicand,
        }
    }
}

impl Neg for &QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        -self.clone()
    }
}
