//! Closed-form coefficient and Fekete–Szegő bounds for the four theorem
//! families and their six named subclasses, evaluated exactly in ℚ(√D).
//!
//! Every evaluator transcribes its own display: the `|a₂|` bound (kept as its
//! exact square), the `|a₃|` bound, and the three numbers that define the
//! piecewise Fekete–Szegő bound (flat value, slope per unit `|1 − μ|`, and
//! threshold). Relations between them are checked by the test suites rather
//! than built in.
//!
//! Thresholds use `|γ|κ²|τ|` in the denominator throughout, which is the
//! value where the two branches meet. The `|a₂|` bound of the `B` family
//! carries the `√κ` factor of its derivation.

use std::cmp::Ordering;
use std::fmt;

use dashu_float::ops::SquareRoot as _;
use dashu_int::ops::Abs as _;

use crate::error::{usage, Result};
use crate::fibonacci::KappaContext;
use crate::functionals::{ClassSpec, Family};
use crate::quadfield::QuadNumber;
use crate::rational::{mp_to_f64, Mp, Rational};

/// Theorem families and named subclasses that have their own displays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BoundFamily {
    W,
    R,
    B,
    P,
    /// `W` with `α = 1 + 2λ`.
    Fsl,
    /// `W` with `λ = 0`.
    Bsl,
    /// `W` with `λ = 0, α = 1`, also `R` with `λ = 1`.
    Hsl,
    /// `R` with `λ = 0`.
    SlGamma,
    /// `B` with `λ = 1`, also `P` with `λ = 0`, also `SLγ` with `γ = 1`.
    Sl,
    /// `P` with `λ = 1`.
    Ksl,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 10] = [
        BoundFamily::W,
        BoundFamily::R,
        BoundFamily::B,
        BoundFamily::P,
        BoundFamily::Fsl,
        BoundFamily::Bsl,
        BoundFamily::Hsl,
        BoundFamily::SlGamma,
        BoundFamily::Sl,
        BoundFamily::Ksl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundFamily::W => "W",
            BoundFamily::R => "R",
            BoundFamily::B => "B",
            BoundFamily::P => "P",
            BoundFamily::Fsl => "FSL",
            BoundFamily::Bsl => "BSL",
            BoundFamily::Hsl => "HSL",
            BoundFamily::SlGamma => "SLg",
            BoundFamily::Sl => "SL",
            BoundFamily::Ksl => "KSL",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        BoundFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .map_or_else(|| usage(format!("unknown family {s:?}")), Ok)
    }
}

impl From<Family> for BoundFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::W => BoundFamily::W,
            Family::R => BoundFamily::R,
            Family::B => BoundFamily::B,
            Family::P => BoundFamily::P,
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Numbers defining `|a₃ − μa₂²| ≤ flat` for `|μ − 1| ≤ threshold` and
/// `≤ |1 − μ|·slope_unit` beyond it.
#[derive(Clone, Debug, PartialEq)]
pub struct FeketeParams {
    pub flat: QuadNumber,
    pub slope_unit: QuadNumber,
    pub threshold: QuadNumber,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub family: BoundFamily,
    /// The expression under the square root in the `|a₂|` display.
    pub radicand: QuadNumber,
    /// Radicand and every denominator positive.
    pub valid: bool,
    /// `|a₂|` bound squared; `None` when invalid.
    pub a2_bound_sq: Option<QuadNumber>,
    pub a3_bound: Option<QuadNumber>,
    pub fekete: Option<FeketeParams>,
}

impl BoundReport {
    /// `√(a2_bound_sq)` at `precision` bits.
    pub fn a2_bound(&self, precision: usize) -> Option<Mp> {
        self.a2_bound_sq.as_ref().map(|s| s.to_mp(precision + 16).sqrt().with_precision(precision).value())
    }

    pub fn a2_bound_f64(&self) -> Option<f64> {
        self.a2_bound(128).map(|m| mp_to_f64(&m))
    }

    pub fn a3_bound_f64(&self) -> Option<f64> {
        self.a3_bound.as_ref().map(QuadNumber::to_f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Flat,
    Slope,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Flat => "flat",
            Branch::Slope => "slope",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeketeReport {
    pub mu: Rational,
    pub value: QuadNumber,
    pub branch: Branch,
    pub threshold: QuadNumber,
    /// `(1 − μ)·slope_unit / 4`, the coefficient multiplying `c₂ + d₂` in
    /// `a₃ − μa₂²`.
    pub h_mu: QuadNumber,
}

/// Evaluates the piecewise bound at `μ`; the flat branch includes the threshold.
pub fn fekete(report: &BoundReport, mu: &Rational) -> Result<FeketeReport> {
    let Some(fp) = &report.fekete else {
        return usage(format!("{} bound is outside its valid domain", report.family));
    };
    let r = fp.flat.radicand();
    let one_minus = Rational::ONE - mu;
    let dist = QuadNumber::rational(one_minus.clone().abs(), r);
    let (branch, value) = if (&fp.threshold - &dist).sign() != Ordering::Less {
        (Branch::Flat, fp.flat.clone())
    } else {
        (Branch::Slope, fp.slope_unit.scale(dist.a()))
    };
    Ok(FeketeReport {
        mu: mu.clone(),
        value,
        branch,
        threshold: fp.threshold.clone(),
        h_mu: fp.slope_unit.scale(&(one_minus / Rational::from(4))),
    })
}

/// Shared building blocks: `X = κ − (κ² + 2)τ` and friends.
struct Terms {
    k: QuadNumber,
    k2t: QuadNumber,
    k3t2: QuadNumber,
    abs_kt: QuadNumber,
    abs_k2t: QuadNumber,
    x: QuadNumber,
    /// `κ − 2(κ² + 1)τ`.
    y: QuadNumber,
    tau: QuadNumber,
}

impl Terms {
    fn new(ctx: &KappaContext) -> Result<Self> {
        if *ctx.kappa() <= Rational::ZERO {
            return usage("coefficient bounds need kappa > 0");
        }
        let ks = ctx.scalars();
        let k = ks.kappa.clone();
        let t = ks.tau.clone();
        let k2 = &k * &k;
        let k2t = &k2 * &t;
        let two = Rational::from(2);
        Ok(Self {
            k3t2: &k2t * &k * &t,
            abs_kt: (&k * &t).abs(),
            abs_k2t: k2t.abs(),
            x: ks.shell_term(),
            y: &k - &(&k2 + &QuadNumber::one(ctx.radicand())).scale(&two) * &t,
            k2t,
            k,
            tau: t,
        })
    }

    fn q(&self, r: &Rational) -> QuadNumber {
        QuadNumber::rational(r.clone(), self.k.radicand())
    }
}

fn positive(x: &QuadNumber) -> bool {
    x.sign() == Ordering::Greater
}

/// Assembles a report, blanking the bounds when the radicand or any listed
/// denominator is not positive.
fn report(
    family: BoundFamily,
    radicand: QuadNumber,
    denominators: &[&QuadNumber],
    build: impl FnOnce() -> (QuadNumber, QuadNumber, FeketeParams),
) -> BoundReport {
    let valid = positive(&radicand) && denominators.iter().all(|d| positive(d));
    if !valid {
        return BoundReport {
            family,
            radicand,
            valid,
            a2_bound_sq: None,
            a3_bound: None,
            fekete: None,
        };
    }
    let (a2sq, a3, fk) = build();
    BoundReport {
        family,
        radicand,
        valid,
        a2_bound_sq: Some(a2sq),
        a3_bound: Some(a3),
        fekete: Some(fk),
    }
}

/// Bounds for a theorem family.
pub fn theorem_bounds(ctx: &KappaContext, spec: &ClassSpec) -> Result<BoundReport> {
    spec.validate()?;
    match spec.family {
        Family::W => bounds_w(ctx, &spec.gamma, &spec.lambda, &spec.alpha),
        Family::R => bounds_r(ctx, &spec.gamma, &spec.lambda),
        Family::B => bounds_b(ctx, &spec.lambda),
        Family::P => bounds_p(ctx, &spec.lambda),
    }
}

/// The displays mix `γ` and `|γ|` in ways that only coincide for `γ > 0`.
fn positive_gamma(gamma: &Rational) -> Result<()> {
    if *gamma <= Rational::ZERO {
        return usage("bounds are evaluated for gamma > 0");
    }
    Ok(())
}

/// `W(γ, λ, α)`, with `Den = γκ²τ(1+2α+2λ) + X(1+α)²`.
pub fn bounds_w(ctx: &KappaContext, gamma: &Rational, lambda: &Rational, alpha: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let a = t.q(&(Rational::ONE + Rational::from(2) * alpha + Rational::from(2) * lambda));
    let one_a = t.q(&(Rational::ONE + alpha));
    let sq1a = &one_a * &one_a;
    let den = &(&g * &t.k2t) * &a + &t.x * &sq1a;
    Ok(report(BoundFamily::W, den.clone(), &[&a], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        (
            &g2k3t2 / &den,
            &(&(&gkt * &t.x) * &sq1a) / &(&a * &den),
            FeketeParams {
                flat: &gkt / &a,
                slope_unit: &g2k3t2 / &den,
                threshold: &den / &(&(&a * &abs_g) * &t.abs_k2t),
            },
        )
    }))
}

/// `R(γ, λ)`, with `M = γκ²τ(2+λ)(1+λ) + 2(1+λ)²X`.
pub fn bounds_r(ctx: &KappaContext, gamma: &Rational, lambda: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let two_l = t.q(&(Rational::from(2) + lambda));
    let one_l = t.q(&(Rational::ONE + lambda));
    let two = Rational::from(2);
    let m = &(&(&g * &t.k2t) * &two_l) * &one_l + (&(&one_l * &one_l) * &t.x).scale(&two);
    Ok(report(BoundFamily::R, m.clone(), &[&two_l], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        let num = &m - &(&(&two_l * &g) * &t.k2t).scale(&two);
        (
            g2k3t2.scale(&two) / &m,
            &(&gkt * &num) / &(&two_l * &m),
            FeketeParams {
                flat: &gkt / &two_l,
                slope_unit: g2k3t2.scale(&two) / &m,
                threshold: &m / &(&(&abs_g * &t.abs_k2t) * &two_l).scale(&two),
            },
        )
    }))
}

/// `B(λ)`, with `Den = λ(2λ−1)κ²τ + X(2λ−1)²`.
pub fn bounds_b(ctx: &KappaContext, lambda: &Rational) -> Result<BoundReport> {
    let t = Terms::new(ctx)?;
    let l = t.q(lambda);
    let tl1 = t.q(&(Rational::from(2) * lambda - Rational::ONE));
    let three_l1 = t.q(&(Rational::from(3) * lambda - Rational::ONE));
    let sq = &tl1 * &tl1;
    let den = &(&l * &tl1) * &t.k2t + &t.x * &sq;
    Ok(report(BoundFamily::B, den.clone(), &[&three_l1], || {
        let quad = t.q(&(Rational::from(2) * lambda * lambda - Rational::from(4) * lambda + Rational::ONE));
        let num = &t.abs_kt * &(&t.x * &sq + &quad * &t.k2t);
        (
            &t.k3t2 / &den,
            &num / &(&three_l1 * &den),
            FeketeParams {
                flat: &t.abs_kt / &three_l1,
                slope_unit: &t.k3t2 / &den,
                threshold: &den / &(&t.abs_k2t * &three_l1),
            },
        )
    }))
}

/// The `|a₂|` bound of the `B` family as written in its theorem statement,
/// `|κτ|/√Den`, without the `√κ` of the derivation.
pub fn b_statement_a2_bound(ctx: &KappaContext, lambda: &Rational, precision: usize) -> Result<Option<Mp>> {
    let r = bounds_b(ctx, lambda)?;
    let t = Terms::new(ctx)?;
    Ok(r.valid.then(|| {
        let sq = &(&t.abs_kt * &t.abs_kt) / &r.radicand;
        sq.to_mp(precision + 16).sqrt().with_precision(precision).value()
    }))
}

/// `P(λ)`, with `Den = κ²τ(1+2λ−λ²) + X(1+λ)²`.
pub fn bounds_p(ctx: &KappaContext, lambda: &Rational) -> Result<BoundReport> {
    let t = Terms::new(ctx)?;
    let one_l = t.q(&(Rational::ONE + lambda));
    let one_2l = t.q(&(Rational::ONE + Rational::from(2) * lambda));
    let quad = t.q(&(Rational::ONE + Rational::from(2) * lambda - lambda * lambda));
    let sq = &one_l * &one_l;
    let den = &t.k2t * &quad + &t.x * &sq;
    let two = Rational::from(2);
    Ok(report(BoundFamily::P, den.clone(), &[&one_2l], || {
        (
            &t.k3t2 / &den,
            &(&(&t.abs_kt * &t.y) * &sq) / &(&one_2l * &den).scale(&two),
            FeketeParams {
                flat: &t.abs_kt / &one_2l.scale(&two),
                slope_unit: &t.k3t2 / &den,
                threshold: &den / &(&t.abs_k2t * &one_2l).scale(&two),
            },
        )
    }))
}

/// Subclass `FSL(γ, λ)`: `Den = 3γκ²τ(1+2λ) + 4X(1+λ)²`.
pub fn cor_fsl(ctx: &KappaContext, gamma: &Rational, lambda: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let one_2l = t.q(&(Rational::ONE + Rational::from(2) * lambda));
    let one_l = t.q(&(Rational::ONE + lambda));
    let sq = &one_l * &one_l;
    let (three, four) = (Rational::from(3), Rational::from(4));
    let den = (&(&g * &t.k2t) * &one_2l).scale(&three) + (&t.x * &sq).scale(&four);
    let three_6l = one_2l.scale(&three);
    Ok(report(BoundFamily::Fsl, den.clone(), &[&one_2l], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        (
            &g2k3t2 / &den,
            (&(&gkt * &t.x) * &sq).scale(&four) / (&one_2l * &den).scale(&three),
            FeketeParams {
                flat: &gkt / &three_6l,
                slope_unit: &g2k3t2 / &den,
                threshold: &den / &(&(&three_6l * &abs_g) * &t.abs_k2t),
            },
        )
    }))
}

/// Subclass `BSL(γ, α)`: `Den = γκ²τ(1+2α) + X(1+α)²`.
pub fn cor_bsl(ctx: &KappaContext, gamma: &Rational, alpha: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let one_2a = t.q(&(Rational::ONE + Rational::from(2) * alpha));
    let one_a = t.q(&(Rational::ONE + alpha));
    let sq = &one_a * &one_a;
    let den = &(&g * &t.k2t) * &one_2a + &t.x * &sq;
    Ok(report(BoundFamily::Bsl, den.clone(), &[&one_2a], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        (
            &g2k3t2 / &den,
            &(&(&gkt * &t.x) * &sq) / &(&one_2a * &den),
            FeketeParams {
                flat: &gkt / &one_2a,
                slope_unit: &g2k3t2 / &den,
                threshold: &den / &(&(&one_2a * &abs_g) * &t.abs_k2t),
            },
        )
    }))
}

/// Subclass `HSL(γ)`: `Den = 3γκ²τ + 4X`.
pub fn cor_hsl(ctx: &KappaContext, gamma: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let (three, four) = (Rational::from(3), Rational::from(4));
    let den = (&g * &t.k2t).scale(&three) + t.x.scale(&four);
    Ok(report(BoundFamily::Hsl, den.clone(), &[], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        (
            &g2k3t2 / &den,
            (&gkt * &t.x).scale(&four) / den.scale(&three),
            FeketeParams {
                flat: gkt.scale(&(Rational::ONE / &three)),
                slope_unit: &g2k3t2 / &den,
                threshold: &den / &(&abs_g * &t.abs_k2t).scale(&three),
            },
        )
    }))
}

/// Subclass `SL(γ)`: `Den = γκ²τ + X`.
pub fn cor_slgamma(ctx: &KappaContext, gamma: &Rational) -> Result<BoundReport> {
    positive_gamma(gamma)?;
    let t = Terms::new(ctx)?;
    let g = t.q(gamma);
    let abs_g = t.q(&gamma.clone().abs());
    let two = Rational::from(2);
    let gk2t = &g * &t.k2t;
    let den = &gk2t + &t.x;
    Ok(report(BoundFamily::SlGamma, den.clone(), &[], || {
        let g2k3t2 = &(&g * &g) * &t.k3t2;
        let gkt = &abs_g * &t.abs_kt;
        (
            &g2k3t2 / &den,
            &(&gkt * &(&t.x - &gk2t).abs()) / &den.scale(&two),
            FeketeParams {
                flat: gkt.scale(&(Rational::ONE / &two)),
                slope_unit: &g2k3t2 / &den,
                threshold: &den / &(&abs_g * &t.abs_k2t).scale(&two),
            },
        )
    }))
}

/// Subclass `SL`: `Den = κ − 2τ`.
pub fn cor_sl(ctx: &KappaContext) -> Result<BoundReport> {
    let t = Terms::new(ctx)?;
    let two = Rational::from(2);
    let den = &t.k - &t.tau.scale(&two);
    Ok(report(BoundFamily::Sl, den.clone(), &[], || {
        (
            &t.k3t2 / &den,
            &(&t.abs_kt * &t.y) / &den.scale(&two),
            FeketeParams {
                flat: t.abs_kt.scale(&(Rational::ONE / &two)),
                slope_unit: &t.k3t2 / &den,
                threshold: &den / &t.abs_k2t.scale(&two),
            },
        )
    }))
}

/// Subclass `KSL`: radicand `2(2κ − (κ² + 4)τ)`.
pub fn cor_ksl(ctx: &KappaContext) -> Result<BoundReport> {
    let t = Terms::new(ctx)?;
    let (two, three) = (Rational::from(2), Rational::from(3));
    let d = QuadNumber::rational(ctx.radicand().value().clone(), ctx.radicand());
    let den2 = t.k.scale(&two) - &d * &t.tau;
    Ok(report(BoundFamily::Ksl, den2.scale(&two), &[&den2], || {
        (
            &t.k3t2 / &den2.scale(&two),
            &(&t.abs_kt * &t.y) / &den2.scale(&three),
            FeketeParams {
                flat: t.abs_kt.scale(&Rational::from_parts_signed(1.into(), 6.into())),
                slope_unit: &t.k3t2 / &den2.scale(&two),
                threshold: &den2 / &t.abs_k2t.scale(&three),
            },
        )
    }))
}

/// Parameters for [`evaluate`]; families ignore what they do not read.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub gamma: Rational,
    pub lambda: Rational,
    pub alpha: Rational,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            gamma: Rational::ONE,
            lambda: Rational::ZERO,
            alpha: Rational::ZERO,
        }
    }
}

/// Dispatches on the family; theorem families validate their parameter ranges.
pub fn evaluate(family: BoundFamily, ctx: &KappaContext, p: &BoundParams) -> Result<BoundReport> {
    let (g, l, a) = (&p.gamma, &p.lambda, &p.alpha);
    match family {
        BoundFamily::W => theorem_bounds(ctx, &ClassSpec::w(g.clone(), l.clone(), a.clone())?),
        BoundFamily::R => theorem_bounds(ctx, &ClassSpec::r(g.clone(), l.clone())?),
        BoundFamily::B => theorem_bounds(ctx, &ClassSpec::b(l.clone())?),
        BoundFamily::P => theorem_bounds(ctx, &ClassSpec::p(l.clone())?),
        BoundFamily::Fsl => cor_fsl(ctx, g, l),
        BoundFamily::Bsl => cor_bsl(ctx, g, a),
        BoundFamily::Hsl => cor_hsl(ctx, g),
        BoundFamily::SlGamma => cor_slgamma(ctx, g),
        BoundFamily::Sl => cor_sl(ctx),
        BoundFamily::Ksl => cor_ksl(ctx),
    }
}

/// Whether two reports describe the same bounds (radicand normalizations may
/// differ between displays, so it is not compared).
pub fn same_bounds(x: &BoundReport, y: &BoundReport) -> bool {
    x.valid == y.valid && x.a2_bound_sq == y.a2_bound_sq && x.a3_bound == y.a3_bound && x.fekete == y.fekete
}
