//! Truncated formal power series `c₀ + c₁z + … + c_N z^N` over a [`Scalar`].
//!
//! Binary operations on series of different orders truncate to the smaller
//! order. Differentiation and division by `z` lower the order by one instead
//! of padding with a zero that would not be a true coefficient; `mul_z`
//! raises it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{usage, Error, Result};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Truncation order used when none is given.
pub const DEFAULT_ORDER: usize = 8;

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S> {
    // Never empty: index 0 doubles as the field template for constants.
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Series with the given coefficients `c₀..c_N`; `N = len − 1`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return usage("a truncated series needs at least one coefficient");
        }
        Ok(Self { coeffs })
    }

    /// Builds `Σ f(k) z^k` for `k = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> S) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn constant(c: S, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn zero(like: &S, order: usize) -> Self {
        Self::constant(like.zero_like(), order)
    }

    pub fn one(like: &S, order: usize) -> Self {
        Self::constant(like.one_like(), order)
    }

    /// The series `z` (just `0` at order 0).
    pub fn identity(like: &S, order: usize) -> Self {
        Self::monomial(like.one_like(), 1, order)
    }

    /// `c·z^k`, truncated at `order`.
    pub fn monomial(c: S, k: usize, order: usize) -> Self {
        let mut out = Self::zero(&c, order);
        if k <= order {
            out.coeffs[k] = c;
        }
        out
    }

    /// Normalized `z + a₂z² + a₃z³ + …` from the tail coefficients.
    pub fn normalized(like: &S, tail: &[S]) -> Self {
        let mut coeffs = vec![like.zero_like(), like.one_like()];
        coeffs.extend(tail.iter().cloned());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Drops every term above `order` (no-op if already lower).
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        Self {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    /// Extends with explicit zero coefficients up to `order`.
    pub fn pad(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() <= order {
            coeffs.push(coeffs[0].zero_like());
        }
        Self { coeffs }
    }

    fn template(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn scale_rational(&self, k: &Rational) -> Self {
        self.scale(&self.template().from_rational_like(k))
    }

    /// `self / other`; the divisor needs a nonzero constant term.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let d0 = &other.coeffs[0];
        if d0.is_zero() {
            return Err(Error::SingularSeries);
        }
        let n = self.order().min(other.order());
        let inv_d0 = d0.one_like() / d0.clone();
        let mut q: Vec<S> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc * inv_d0.clone());
        }
        Ok(Self { coeffs: q })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.template(), self.order()).checked_div(self)
    }

    /// `self(inner(z))`; `inner` must have a zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return usage("composition needs an inner series with zero constant term");
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Compositional inverse of `z + c₂z² + …`.
    ///
    /// Each pass fixes one coefficient: with `g` correct below `z^k`, the
    /// `z^k` coefficient of `f∘g` is `g_k` plus terms in `g₁..g_{k−1}`, so
    /// subtracting it from `g_k` makes `f∘g ≡ z` through `z^k`.
    pub fn revert(&self) -> Result<Self> {
        if self.order() == 0 || !self.coeffs[0].is_zero() || self.coeffs[1] != self.coeffs[1].one_like()
        {
            return usage("reversion needs a series of the form z + c2 z^2 + ...");
        }
        let n = self.order();
        let mut g = Self::identity(self.template(), n);
        for k in 2..=n {
            let composed = self.compose(&g)?;
            g.coeffs[k] = g.coeffs[k].clone() - composed.coeffs[k].clone();
        }
        Ok(g)
    }

    /// Termwise derivative, of order `N − 1` (order 0 stays a zero constant).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.template(), 0);
        }
        Self {
            coeffs: (1..=self.order())
                .map(|k| self.coeffs[k].clone() * self.template().from_i64_like(k as i64))
                .collect(),
        }
    }

    /// `f(z)/z` for `f(0) = 0`, of order `N − 1`.
    pub fn div_z(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return usage("division by z needs a zero constant term");
        }
        if self.order() == 0 {
            return Ok(self.clone());
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `z·f(z)`, of order `N + 1`.
    pub fn mul_z(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.template().zero_like());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `log f` for `f(0) = 1`, from `(log f)′ = f′/f`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != self.coeffs[0].one_like() {
            return usage("series logarithm needs constant term 1");
        }
        let n = self.order();
        let t = self.template();
        let mut l: Vec<S> = vec![t.zero_like(); n + 1];
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone() * t.from_i64_like(k as i64);
            for j in 1..k {
                acc = acc - l[j].clone() * t.from_i64_like(j as i64) * self.coeffs[k - j].clone();
            }
            l[k] = acc / t.from_i64_like(k as i64);
        }
        Ok(Self { coeffs: l })
    }

    /// `exp f` for `f(0) = 0`, from `E′ = f′E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return usage("series exponential needs constant term 0");
        }
        let n = self.order();
        let t = self.template();
        let mut e: Vec<S> = Vec::with_capacity(n + 1);
        e.push(t.one_like());
        for k in 1..=n {
            let mut acc = t.zero_like();
            for j in 1..=k {
                acc = acc + t.from_i64_like(j as i64) * self.coeffs[j].clone() * e[k - j].clone();
            }
            e.push(acc / t.from_i64_like(k as i64));
        }
        Ok(Self { coeffs: e })
    }

    /// `f^e` for `f(0) = 1` and any exponent in the coefficient field.
    ///
    /// Uses the recurrence from `f·(f^e)′ = e·f′·f^e`, which equals
    /// `exp(e·log f)` and needs only field operations, so exact mode handles
    /// every exponent in ℚ(√D), not just integers.
    pub fn pow(&self, e: &S) -> Result<Self> {
        if self.coeffs[0] != self.coeffs[0].one_like() {
            return usage("series power needs constant term 1");
        }
        let n = self.order();
        let t = self.template();
        let mut g: Vec<S> = Vec::with_capacity(n + 1);
        g.push(t.one_like());
        for k in 1..=n {
            let mut acc = t.zero_like();
            for j in 1..=k {
                let w = e.clone() * t.from_i64_like(j as i64) - t.from_i64_like((k - j) as i64);
                acc = acc + w * self.coeffs[j].clone() * g[k - j].clone();
            }
            g.push(acc / t.from_i64_like(k as i64));
        }
        Ok(Self { coeffs: g })
    }

    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        self.pow(&self.template().from_rational_like(e))
    }

    /// Largest coefficientwise [`Scalar::residual`] against `other` over the
    /// common order.
    pub fn max_residual(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.residual(y))
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn add(self, rhs: Self) -> TruncatedSeries<S> {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn sub(self, rhs: Self) -> TruncatedSeries<S> {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }
}

/// Cauchy product truncated at the smaller order.
impl<S: Scalar> Mul for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn mul(self, rhs: Self) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = self.coeffs[0].clone() * rhs.coeffs[k].clone();
                for j in 1..=k {
                    acc = acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone();
                }
                acc
            })
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl<S: Scalar> Neg for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;
    fn neg(self) -> TruncatedSeries<S> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl<S: Scalar> $trait for TruncatedSeries<S> {
            type Output = TruncatedSeries<S>;
            fn $method(self, rhs: Self) -> TruncatedSeries<S> {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, "; O(z^{})]", self.order() + 1)
    }
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}
