//! The four class operators applied to truncated series, the printed linear
//! forms of their `z` and `z²` coefficients, and the solution of the
//! resulting coefficient equations for `a₂` and `a₃`.
//!
//! The f-side and g-side `z²` forms of every family share the structure
//! `A·a₃ + Q·a₂²` and `−A·a₃ + Q′·a₂²`, and the `z` forms are `±Z·a₂`, so a
//! family is described by the four numbers `(Z, A, Q, Q′)`.

use std::fmt;

use crate::error::{usage, Error, Result};
use crate::fibonacci::KappaScalars;
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;
use crate::shelllike::CaratheodoryPrefix;

/// The four function classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    /// `1 + (1/γ)[(1−α+2λ)f/z + (α−2λ)f′ + λzf″ − 1]`.
    W,
    /// `1 + (1/γ)[f′(f/z)^{λ−1} − 1]`.
    R,
    /// `f′^λ / (f/z)`.
    B,
    /// `(zf′ + λz²f″) / ((1−λ)f + λzf′)`.
    P,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::W, Family::R, Family::B, Family::P];

    pub fn name(self) -> &'static str {
        match self {
            Family::W => "W",
            Family::R => "R",
            Family::B => "B",
            Family::P => "P",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A class together with its parameters. `gamma` and `alpha` are carried by
/// every family but only read where the class uses them (`γ = 1` and `α = 0`
/// otherwise).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassSpec {
    pub family: Family,
    #[serde(serialize_with = "ser_rational")]
    pub gamma: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
}

fn ser_rational<Ser: serde::Serializer>(r: &Rational, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.serialize_str(&r.to_string())
}

impl ClassSpec {
    /// `W(γ, λ, α)` with `γ ≠ 0`, `λ ≥ 0`, `α ≥ 0`.
    pub fn w(gamma: Rational, lambda: Rational, alpha: Rational) -> Result<Self> {
        let spec = Self::new_unchecked(Family::W, gamma, lambda, alpha);
        spec.validate()?;
        Ok(spec)
    }

    /// `R(γ, λ)` with `γ ≠ 0`, `λ ≥ 0`.
    pub fn r(gamma: Rational, lambda: Rational) -> Result<Self> {
        let spec = Self::new_unchecked(Family::R, gamma, lambda, Rational::ZERO);
        spec.validate()?;
        Ok(spec)
    }

    /// `B(λ)` with `λ ≥ 1`.
    pub fn b(lambda: Rational) -> Result<Self> {
        let spec = Self::new_unchecked(Family::B, Rational::ONE, lambda, Rational::ZERO);
        spec.validate()?;
        Ok(spec)
    }

    /// `P(λ)` with `0 ≤ λ ≤ 1`.
    pub fn p(lambda: Rational) -> Result<Self> {
        let spec = Self::new_unchecked(Family::P, Rational::ONE, lambda, Rational::ZERO);
        spec.validate()?;
        Ok(spec)
    }

    /// No range checks; used to probe degenerate parameters.
    pub fn new_unchecked(family: Family, gamma: Rational, lambda: Rational, alpha: Rational) -> Self {
        Self {
            family,
            gamma,
            lambda,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (g, l, a) = (&self.gamma, &self.lambda, &self.alpha);
        if g.is_zero() {
            return usage("gamma must be nonzero");
        }
        let ok = match self.family {
            Family::W => *l >= Rational::ZERO && *a >= Rational::ZERO,
            Family::R => *l >= Rational::ZERO,
            Family::B => *l >= Rational::ONE && g.is_one() && a.is_zero(),
            Family::P => *l >= Rational::ZERO && *l <= Rational::ONE && g.is_one() && a.is_zero(),
        };
        if !ok {
            let need = match self.family {
                Family::W => "lambda >= 0 and alpha >= 0",
                Family::R => "lambda >= 0",
                Family::B => "lambda >= 1 (no gamma or alpha)",
                Family::P => "0 <= lambda <= 1 (no gamma or alpha)",
            };
            return usage(format!("family {} requires {need}", self.family));
        }
        Ok(())
    }

    /// Compact `name=value` listing of the parameters the family reads.
    pub fn describe(&self) -> String {
        match self.family {
            Family::W => format!("W(gamma={}, lambda={}, alpha={})", self.gamma, self.lambda, self.alpha),
            Family::R => format!("R(gamma={}, lambda={})", self.gamma, self.lambda),
            Family::B => format!("B(lambda={})", self.lambda),
            Family::P => format!("P(lambda={})", self.lambda),
        }
    }

    fn params<S: Scalar>(&self, like: &S) -> (S, S, S) {
        (
            like.from_rational_like(&self.gamma),
            like.from_rational_like(&self.lambda),
            like.from_rational_like(&self.alpha),
        )
    }
}

/// Candidate Taylor data `f(z) = z + a₂z² + a₃z³ (+ a₄z⁴)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientPair<S> {
    pub a2: S,
    pub a3: S,
    pub a4: Option<S>,
}

impl<S: Scalar> CoefficientPair<S> {
    pub fn new(a2: S, a3: S) -> Self {
        Self { a2, a3, a4: None }
    }

    /// The normalized series through `z^order`, zero-padded past the data.
    pub fn series(&self, order: usize) -> TruncatedSeries<S> {
        let mut tail = vec![self.a2.clone(), self.a3.clone()];
        if let Some(a4) = &self.a4 {
            tail.push(a4.clone());
        }
        TruncatedSeries::normalized(&self.a2, &tail).pad(order).truncate(order)
    }
}

/// Applies the class operator to a normalized `f`.
///
/// The result has constant term 1. Orders drop by one through `f/z` and
/// `f′`, so an order-`N` input yields order `N − 1`.
pub fn apply_functional<S: Scalar>(spec: &ClassSpec, f: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    if f.order() < 2 || !f.coeff(0).is_zero() || f.coeff(1) != f.coeff(1).one_like() {
        return usage("the class operators need a normalized series z + a2 z^2 + ... of order >= 2");
    }
    let like = f.coeff(1);
    let (gamma, lambda, alpha) = spec.params(&like);
    let one = like.one_like();
    let f_over_z = f.div_z()?;
    let d1 = f.derivative();
    let n = d1.order();
    let out = match spec.family {
        Family::W => {
            let two = like.from_i64_like(2);
            let zf2 = d1.derivative().mul_z();
            let body = &(&f_over_z.scale(&(one.clone() - alpha.clone() + two.clone() * lambda.clone()))
                + &d1.scale(&(alpha - two * lambda.clone())))
                + &zf2.scale(&lambda);
            let body = &body - &TruncatedSeries::one(&like, n);
            &TruncatedSeries::one(&like, n) + &body.scale(&(one / gamma))
        }
        Family::R => {
            let body = &d1 * &f_over_z.pow(&(lambda - one.clone()))?;
            let body = &body - &TruncatedSeries::one(&like, n);
            &TruncatedSeries::one(&like, n) + &body.scale(&(one / gamma))
        }
        Family::B => d1.pow(&lambda)?.checked_div(&f_over_z)?,
        Family::P => {
            // Numerator and denominator both vanish at 0; divide each by z.
            let num = &d1 + &d1.derivative().mul_z().scale(&lambda);
            let den = &f_over_z.scale(&(one - lambda.clone())) + &d1.scale(&lambda);
            num.checked_div(&den)?
        }
    };
    Ok(out)
}

/// Coefficients of the printed coefficient identities:
/// f side `Z·a₂` and `A·a₃ + Q·a₂²`; g side `−Z·a₂` and `−A·a₃ + Q′·a₂²`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForms<S> {
    pub z: S,
    pub a: S,
    pub q: S,
    pub q_inv: S,
}

/// The printed forms for `spec`, in the field of `like`.
pub fn printed_forms<S: Scalar>(spec: &ClassSpec, like: &S) -> Result<LinearForms<S>> {
    let (g, l, al) = spec.params(like);
    let int = |v: i64| like.from_i64_like(v);
    let half = like.from_rational_like(&Rational::from_parts_signed(1.into(), 2.into()));
    let forms = match spec.family {
        Family::W => {
            let a = (int(1) + int(2) * al.clone() + int(2) * l) / g.clone();
            LinearForms {
                z: (int(1) + al) / g,
                q: like.zero_like(),
                q_inv: int(2) * a.clone(),
                a,
            }
        }
        Family::R => {
            let a = (int(2) + l.clone()) / g.clone();
            LinearForms {
                z: (int(1) + l.clone()) / g,
                q: a.clone() * half.clone() * (l.clone() - int(1)),
                q_inv: a.clone() * half * (int(3) + l),
                a,
            }
        }
        Family::B => {
            let l2 = l.clone() * l.clone();
            LinearForms {
                z: int(2) * l.clone() - int(1),
                a: int(3) * l.clone() - int(1),
                q: int(2) * l2.clone() - int(4) * l.clone() + int(1),
                q_inv: int(2) * l2 + int(2) * l - int(1),
            }
        }
        Family::P => {
            let l2 = l.clone() * l.clone();
            let one_l = int(1) + l.clone();
            LinearForms {
                z: one_l.clone(),
                a: int(2) * (int(1) + int(2) * l.clone()),
                q: -(one_l.clone() * one_l),
                q_inv: -(l2 - int(6) * l - int(3)),
            }
        }
    };
    if forms.z.is_zero() {
        return Err(Error::SingularParameter(format!(
            "{}: the z-coefficient of a2 vanishes",
            spec.describe()
        )));
    }
    if forms.a.is_zero() {
        return Err(Error::SingularParameter(format!(
            "{}: the z^2-coefficient of a3 vanishes",
            spec.describe()
        )));
    }
    Ok(forms)
}

impl<S: Scalar> LinearForms<S> {
    /// `(z¹, z²)` coefficients of the f-side operator at `(a₂, a₃)`.
    pub fn f_side(&self, p: &CoefficientPair<S>) -> (S, S) {
        let a2sq = p.a2.clone() * p.a2.clone();
        (
            self.z.clone() * p.a2.clone(),
            self.a.clone() * p.a3.clone() + self.q.clone() * a2sq,
        )
    }

    /// `(w¹, w²)` coefficients of the g-side operator at `(a₂, a₃)`.
    pub fn g_side(&self, p: &CoefficientPair<S>) -> (S, S) {
        let a2sq = p.a2.clone() * p.a2.clone();
        (
            -(self.z.clone() * p.a2.clone()),
            self.q_inv.clone() * a2sq - self.a.clone() * p.a3.clone(),
        )
    }
}

/// The `z` and `z²` coefficients of `p̃_κ(u(z))`, rearranged as
/// `p̃₁c₁/2` and `½c₂p̃₁ + (c₁²/4)(p̃₂ − p̃₁)`.
pub fn subordination_rhs<S: Scalar>(ks: &KappaScalars<S>, c: &CaratheodoryPrefix<S>) -> (S, S) {
    let half = c.c1.from_rational_like(&Rational::from_parts_signed(1.into(), 2.into()));
    let quarter = half.clone() * half.clone();
    let p1 = ks.p1();
    (
        half.clone() * c.c1.clone() * p1.clone(),
        half * c.c2.clone() * p1.clone() + quarter * c.c1.clone() * c.c1.clone() * (ks.p2() - p1),
    )
}

/// Whether the printed forms match direct expansion of the operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConsistencyFlags {
    pub f_z1: bool,
    pub f_z2: bool,
    pub g_z1: bool,
    pub g_z2: bool,
}

impl ConsistencyFlags {
    pub fn all(&self) -> bool {
        self.f_z1 && self.f_z2 && self.g_z1 && self.g_z2
    }
}

/// Maximum residual between the printed forms and the expanded operator on
/// `f` and on `f⁻¹`, per coefficient, as `(f_z1, f_z2, g_z1, g_z2)`.
pub fn form_residuals<S: Scalar>(spec: &ClassSpec, p: &CoefficientPair<S>) -> Result<[f64; 4]> {
    let forms = printed_forms(spec, &p.a2)?;
    let f = p.series(4);
    let g = f.revert()?;
    let ef = apply_functional(spec, &f)?;
    let eg = apply_functional(spec, &g)?;
    let (pf1, pf2) = forms.f_side(p);
    let (pg1, pg2) = forms.g_side(p);
    Ok([
        ef.coeff(1).residual(&pf1),
        ef.coeff(2).residual(&pf2),
        eg.coeff(1).residual(&pg1),
        eg.coeff(2).residual(&pg2),
    ])
}

pub fn consistency_flags<S: Scalar>(spec: &ClassSpec, p: &CoefficientPair<S>, tolerance: f64) -> Result<ConsistencyFlags> {
    let tol = match S::MODE {
        crate::scalar::Mode::Exact => 0.0,
        crate::scalar::Mode::Float => tolerance,
    };
    let r = form_residuals(spec, p)?;
    Ok(ConsistencyFlags {
        f_z1: r[0] <= tol,
        f_z2: r[1] <= tol,
        g_z1: r[2] <= tol,
        g_z2: r[3] <= tol,
    })
}

/// The equations solved by generic elimination on the linear forms.
///
/// With `d₁ = −c₁`: `a₂ = p̃₁c₁/(2Z)`; squaring and adding the `z`
/// equations gives the `c₁` route `a₂² = (c₁² + d₁²)p̃₁²/(8Z²)`; adding the
/// `z²` equations and eliminating `c₁² + d₁²` gives
/// `a₂² = ½(c₂ + d₂)p̃₁ / [(Q + Q′) − 2Z²(p̃₂ − p̃₁)/p̃₁²]`; subtracting them
/// gives `a₃ = [½(c₂ − d₂)p̃₁ − (Q − Q′)a₂²] / (2A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSolution<S> {
    /// From the f-side `z` equation.
    pub a2_from_c1: S,
    /// From the g-side `z` equation.
    pub a2_from_d1: S,
    pub a2sq_c1_route: S,
    pub a2sq_added: S,
    /// Subtracted-equations `a₃`, using `a2sq_added`.
    pub a3: S,
    /// `a₃` solved from the f-side `z²` equation alone, with `a2_from_c1`.
    pub a3_f_side: S,
    pub consistency: ConsistencyFlags,
}

/// Per-family constants of the elimination: `a₂ = k_c1·c₁`,
/// `a₂² = k_added·(c₂ + d₂)`, `a₃ = k_sub·(c₂ − d₂) + k_a2sq·a₂²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elimination<S> {
    pub k_c1: S,
    pub k_added: S,
    pub k_sub: S,
    pub k_a2sq: S,
}

pub fn elimination<S: Scalar>(spec: &ClassSpec, ks: &KappaScalars<S>) -> Result<Elimination<S>> {
    let forms = printed_forms(spec, &ks.kappa)?;
    let like = &ks.kappa;
    let two = like.from_i64_like(2);
    let p1 = ks.p1();
    let z2 = forms.z.clone() * forms.z.clone();
    let den_added = forms.q.clone() + forms.q_inv.clone() - two.clone() * z2 * (ks.p2() - p1.clone()) / (p1.clone() * p1.clone());
    if den_added.is_zero() {
        return Err(Error::SingularParameter(format!(
            "{}: the added-equations coefficient of a2^2 vanishes",
            spec.describe()
        )));
    }
    let half = like.from_rational_like(&Rational::from_parts_signed(1.into(), 2.into()));
    let two_a = two.clone() * forms.a.clone();
    Ok(Elimination {
        k_c1: p1.clone() / (two * forms.z.clone()),
        k_added: half.clone() * p1.clone() / den_added,
        k_sub: half * p1 / two_a.clone(),
        k_a2sq: -(forms.q - forms.q_inv) / two_a,
    })
}

/// Solves the coefficient equations for Carathéodory data `c` and `d`.
pub fn coefficient_equations<S: Scalar>(
    spec: &ClassSpec,
    ks: &KappaScalars<S>,
    c: &CaratheodoryPrefix<S>,
    d: &CaratheodoryPrefix<S>,
    tolerance: f64,
) -> Result<CoefficientSolution<S>> {
    let mirrored = match S::MODE {
        crate::scalar::Mode::Exact => d.c1 == -c.c1.clone(),
        crate::scalar::Mode::Float => d.c1.residual(&-c.c1.clone()) <= tolerance,
    };
    if !mirrored {
        return usage("the coefficient equations require d1 = -c1");
    }
    let forms = printed_forms(spec, &ks.kappa)?;
    let el = elimination(spec, ks)?;
    let (rhs_c1, rhs_c2) = subordination_rhs(ks, c);
    let (rhs_d1, _) = subordination_rhs(ks, d);
    let like = &ks.kappa;
    let eight = like.from_i64_like(8);
    let p1 = ks.p1();

    let a2_from_c1 = rhs_c1 / forms.z.clone();
    let a2_from_d1 = -(rhs_d1 / forms.z.clone());
    let sum_sq = c.c1.clone() * c.c1.clone() + d.c1.clone() * d.c1.clone();
    let a2sq_c1_route = sum_sq * p1.clone() * p1 / (eight * forms.z.clone() * forms.z.clone());
    let a2sq_added = el.k_added.clone() * (c.c2.clone() + d.c2.clone());
    let a3 = el.k_sub.clone() * (c.c2.clone() - d.c2.clone()) + el.k_a2sq.clone() * a2sq_added.clone();
    let a2c = a2_from_c1.clone() * a2_from_c1.clone();
    let a3_f_side = (rhs_c2 - forms.q.clone() * a2c) / forms.a.clone();
    let consistency = consistency_flags(spec, &CoefficientPair::new(a2_from_c1.clone(), a3.clone()), tolerance)?;
    Ok(CoefficientSolution {
        a2_from_c1,
        a2_from_d1,
        a2sq_c1_route,
        a2sq_added,
        a3,
        a3_f_side,
        consistency,
    })
}

/// Carathéodory data for which both `z²` equations hold at the given
/// `(a₂, a₃)`, by inverting the printed forms (`c₃ = d₃ = 0`).
pub fn consistent_prefixes<S: Scalar>(
    spec: &ClassSpec,
    ks: &KappaScalars<S>,
    p: &CoefficientPair<S>,
) -> Result<(CaratheodoryPrefix<S>, CaratheodoryPrefix<S>)> {
    let forms = printed_forms(spec, &ks.kappa)?;
    let like = &ks.kappa;
    let two = like.from_i64_like(2);
    let quarter = like.from_rational_like(&Rational::from_parts_signed(1.into(), 4.into()));
    let p1 = ks.p1();
    let (f1, f2) = forms.f_side(p);
    let (_, g2) = forms.g_side(p);
    let c1 = two.clone() * f1 / p1.clone();
    let corr = quarter * c1.clone() * c1.clone() * (ks.p2() - p1.clone());
    let c2 = two.clone() * (f2 - corr.clone()) / p1.clone();
    let d2 = two * (g2 - corr) / p1;
    let zero = like.zero_like();
    Ok((
        CaratheodoryPrefix::new(c1.clone(), c2, zero.clone()),
        CaratheodoryPrefix::new(-c1, d2, zero),
    ))
}

/// The subclasses obtained by fixing parameters, with the display each must
/// reproduce for its `z` and `z²` coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Collapse {
    /// `W(γ, λ, 1 + 2λ)`: `1 + (1/γ)(f′ + λzf″ − 1)`.
    F,
    /// `W(γ, 0, α)`: `1 + (1/γ)[(1 − α)f/z + αf′ − 1]`.
    Bazilevic,
    /// `W(γ, 0, 1)` and `R(γ, 1)`: `1 + (f′ − 1)/γ`.
    H,
    /// `B(1)` and `P(0)`: `zf′/f`.
    Starlike,
    /// `P(1)`: `1 + zf″/f′`.
    Convex,
}

/// Direct expansion of the collapsed operator, computed without the general
/// family code.
pub fn collapse_display<S: Scalar>(
    which: Collapse,
    gamma: &Rational,
    lambda_or_alpha: &Rational,
    f: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>> {
    let like = f.coeff(1);
    let g = like.from_rational_like(gamma);
    let t = like.from_rational_like(lambda_or_alpha);
    let one = like.one_like();
    let d1 = f.derivative();
    let n = d1.order();
    let unit = TruncatedSeries::one(&like, n);
    Ok(match which {
        Collapse::F => {
            let body = &(&d1 + &d1.derivative().mul_z().scale(&t)) - &unit;
            &unit + &body.scale(&(one / g))
        }
        Collapse::Bazilevic => {
            let body = &(&f.div_z()?.scale(&(one.clone() - t.clone())) + &d1.scale(&t)) - &unit;
            &unit + &body.scale(&(one / g))
        }
        Collapse::H => &unit + &(&d1 - &unit).scale(&(one / g)),
        Collapse::Starlike => d1.checked_div(&f.div_z()?)?,
        Collapse::Convex => &unit + &d1.derivative().mul_z().checked_div(&d1)?,
    })
}
