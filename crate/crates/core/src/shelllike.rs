//! The shell-like function `p̃_κ(z) = (1 + τ²z²)/(1 − κτz − τ²z²)` and the
//! Carathéodory → Schwarz → subordination expansion through `z³`.

use std::f64::consts::PI;

use crate::error::{usage, Result};
use crate::fibonacci::{KappaContext, KappaScalars};
use crate::quadfield::QuadNumber;
use crate::rational::{mp_to_f64, Rational};
use crate::scalar::{MpComplex, Scalar};
use crate::series::TruncatedSeries;

/// Expansion of `p̃_κ` through `z^order` by series division.
pub fn ptilde_series<S: Scalar>(ks: &KappaScalars<S>, order: usize) -> TruncatedSeries<S> {
    let t2 = ks.tau.clone() * ks.tau.clone();
    let one = ks.tau.one_like();
    let num = TruncatedSeries::from_fn(order, |k| match k {
        0 => one.clone(),
        2 => t2.clone(),
        _ => one.zero_like(),
    });
    let den = TruncatedSeries::from_fn(order, |k| match k {
        0 => one.clone(),
        1 => -ks.p1(),
        2 => -t2.clone(),
        _ => one.zero_like(),
    });
    num.checked_div(&den).expect("denominator has constant term 1")
}

/// `p̃_{κ,n} = (F_{κ,n−1} + F_{κ,n+1})·τⁿ` for `n ≥ 1`.
pub fn ptilde_coeff_closed(ctx: &KappaContext, n: usize) -> Result<QuadNumber> {
    let n32 = u32::try_from(n).map_err(|_| crate::Error::Usage("index too large".into()))?;
    Ok(ctx.lucas_like(n)? * ctx.tau().pow(n32))
}

/// Leading coefficients of a Carathéodory function `h(z) = 1 + c₁z + c₂z² + c₃z³ + …`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaratheodoryPrefix<S> {
    pub c1: S,
    pub c2: S,
    pub c3: S,
}

impl<S: Scalar> CaratheodoryPrefix<S> {
    pub fn new(c1: S, c2: S, c3: S) -> Self {
        Self { c1, c2, c3 }
    }

    /// Rejects prefixes outside the coefficient bound `|cᵢ| ≤ 2`.
    pub fn checked(c1: S, c2: S, c3: S, precision: usize) -> Result<Self> {
        let out = Self::new(c1, c2, c3);
        if !out.within_lemma_bound(precision, 0.0) {
            return usage("Caratheodory coefficients must satisfy |c_i| <= 2");
        }
        Ok(out)
    }

    /// Whether `|cᵢ| ≤ 2(1 + slack)` for all three coefficients.
    pub fn within_lemma_bound(&self, precision: usize, slack: f64) -> bool {
        let limit = 2.0 * (1.0 + slack);
        [&self.c1, &self.c2, &self.c3].iter().all(|c| match S::MODE {
            crate::scalar::Mode::Exact => {
                let two = c.from_i64_like(2);
                c.abs_real()
                    .map(|a| (two - a).real_sign().map(|s| s.is_ge()).unwrap_or(false))
                    .unwrap_or(false)
            }
            crate::scalar::Mode::Float => mp_to_f64(&c.magnitude(precision)) <= limit,
        })
    }

    /// `1 + c₁z + c₂z² + c₃z³`, truncated at `order ≤ 3`.
    pub fn series(&self, order: usize) -> TruncatedSeries<S> {
        let cs = [self.c1.one_like(), self.c1.clone(), self.c2.clone(), self.c3.clone()];
        TruncatedSeries::from_fn(order.min(3), |k| cs[k].clone())
    }

    /// The same function with its argument negated: `h(−z)`.
    pub fn reflected(&self) -> Self {
        Self::new(-self.c1.clone(), self.c2.clone(), -self.c3.clone())
    }

    /// `t·self + (1 − t)·other`; convex combinations stay in the class.
    pub fn mix(&self, other: &Self, t: &Rational) -> Self {
        let t = self.c1.from_rational_like(t);
        let s = t.one_like() - t.clone();
        Self::new(
            t.clone() * self.c1.clone() + s.clone() * other.c1.clone(),
            t.clone() * self.c2.clone() + s.clone() * other.c2.clone(),
            t * self.c3.clone() + s * other.c3.clone(),
        )
    }
}

impl CaratheodoryPrefix<MpComplex> {
    /// Coefficients of the extreme function `(1 + xz)/(1 − xz)`, `cₙ = 2xⁿ`.
    pub fn extreme(x: &MpComplex) -> Self {
        let two = x.from_i64_like(2);
        let x2 = x.clone() * x.clone();
        let x3 = x2.clone() * x.clone();
        Self::new(two.clone() * x.clone(), two.clone() * x2, two * x3)
    }
}

/// Leading coefficients of the Schwarz function `u = (h − 1)/(h + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzPrefix<S> {
    pub w1: S,
    pub w2: S,
    pub w3: S,
}

impl<S: Scalar> SchwarzPrefix<S> {
    pub fn from_caratheodory(c: &CaratheodoryPrefix<S>) -> Self {
        let half = c.c1.from_rational_like(&Rational::from_parts_signed(1.into(), 2.into()));
        let quarter = half.clone() * half.clone();
        let c1sq = c.c1.clone() * c.c1.clone();
        let w1 = half.clone() * c.c1.clone();
        let w2 = half.clone() * (c.c2.clone() - half.clone() * c1sq.clone());
        let w3 = half * (c.c3.clone() - c.c1.clone() * c.c2.clone() + quarter * c1sq * c.c1.clone());
        Self { w1, w2, w3 }
    }

    /// Inverse map `h = (1 + u)/(1 − u) = 1 + 2u + 2u² + 2u³ + …`.
    pub fn to_caratheodory(&self) -> CaratheodoryPrefix<S> {
        let two = self.w1.from_i64_like(2);
        let w1sq = self.w1.clone() * self.w1.clone();
        CaratheodoryPrefix::new(
            two.clone() * self.w1.clone(),
            two.clone() * (self.w2.clone() + w1sq.clone()),
            two.clone() * (self.w3.clone() + two * self.w1.clone() * self.w2.clone() + w1sq * self.w1.clone()),
        )
    }

    /// `w₁z + w₂z² + w₃z³`, truncated at `order ≤ 3`.
    pub fn series(&self, order: usize) -> TruncatedSeries<S> {
        let ws = [self.w1.zero_like(), self.w1.clone(), self.w2.clone(), self.w3.clone()];
        TruncatedSeries::from_fn(order.min(3), |k| ws[k].clone())
    }
}

/// `p̃_κ(u(z))` through `z^order` (`order ≤ 3`), from the closed coefficient
/// formulas in `c₁, c₂, c₃` and `p̃_{κ,1..3}`.
pub fn subordination_expand<S: Scalar>(
    ks: &KappaScalars<S>,
    c: &CaratheodoryPrefix<S>,
    order: usize,
) -> TruncatedSeries<S> {
    let w = SchwarzPrefix::from_caratheodory(c);
    let (p1, p2, p3) = (ks.p1(), ks.p2(), ks.p3());
    let one = c.c1.one_like();
    let c1sq = c.c1.clone() * c.c1.clone();
    let quarter = one.from_rational_like(&Rational::from_parts_signed(1.into(), 4.into()));
    let eighth = one.from_rational_like(&Rational::from_parts_signed(1.into(), 8.into()));
    // z: p̃₁w₁; z²: p̃₁w₂ + p̃₂w₁²; z³: p̃₁w₃ + 2p̃₂w₁w₂ + p̃₃w₁³.
    let z1 = p1.clone() * w.w1.clone();
    let z2 = p1.clone() * w.w2.clone() + quarter * c1sq.clone() * p2.clone();
    let z3 = p1 * w.w3 + c.c1.clone() * w.w2 * p2 + eighth * c1sq * c.c1.clone() * p3;
    let cs = [one, z1, z2, z3];
    TruncatedSeries::from_fn(order.min(3), |k| cs[k].clone())
}

/// Closed-form `p̃_κ(z)` at a point.
pub fn ptilde_at(ks: &KappaScalars<MpComplex>, z: &MpComplex) -> MpComplex {
    let tz = ks.tau.clone() * z.clone();
    let t2z2 = tz.clone() * tz.clone();
    let one = z.one_like();
    (one.clone() + t2z2.clone()) / (one - ks.kappa.clone() * tz - t2z2)
}

/// Smallest `Re p̃_κ(re^{iθ})` over `m` equally spaced `θ`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RealPartProbe {
    pub min_real_part: f64,
    pub theta: f64,
}

/// Evaluates the rational function itself (not a truncation) on the circle
/// of radius `r`.
pub fn min_real_part_probe(ctx: &KappaContext, r: f64, m: usize, precision: usize) -> Result<RealPartProbe> {
    if !(r > 0.0 && r < 1.0) {
        return usage("probe radius must lie in (0, 1)");
    }
    if m < 8 {
        return usage("probe needs at least 8 grid points");
    }
    let ks = ctx.float_scalars(precision);
    let radius = MpComplex::from_f64(r, 0.0, precision);
    let mut best = RealPartProbe {
        min_real_part: f64::INFINITY,
        theta: 0.0,
    };
    for j in 0..m {
        let theta = 2.0 * PI * j as f64 / m as f64;
        let z = radius.clone() * MpComplex::unit(theta, precision);
        let v = ptilde_at(&ks, &z).re_f64();
        if v < best.min_real_part {
            best = RealPartProbe { min_real_part: v, theta };
        }
    }
    Ok(best)
}

/// Sample points of the Carathéodory class for sweeps: the `m` extreme
/// functions `(1 + xz)/(1 − xz)` with `x = e^{2πij/m}`, every pairwise
/// midpoint, and every pairwise `1/4 : 3/4` combination. For `m = 8` this is
/// 8 + 28 + 28 = 64 points.
pub fn caratheodory_grid(m: usize, precision: usize) -> Vec<CaratheodoryPrefix<MpComplex>> {
    let extremes: Vec<_> = (0..m)
        .map(|j| CaratheodoryPrefix::extreme(&MpComplex::unit(2.0 * PI * j as f64 / m as f64, precision)))
        .collect();
    let mut grid = extremes.clone();
    for t in [Rational::from_parts_signed(1.into(), 2.into()), Rational::from_parts_signed(1.into(), 4.into())] {
        for i in 0..m {
            for j in i + 1..m {
                grid.push(extremes[i].mix(&extremes[j], &t));
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn kappas() -> Vec<Rational> {
        vec![int(1), int(2), int(3), rat(1, 2)]
    }

    #[test]
    fn kappa_one_expansion() {
        let ctx = KappaContext::new(int(1)).unwrap();
        let s = ptilde_series(&ctx.scalars(), 5);
        let t = ctx.tau();
        for (n, c) in [1, 1, 3, 4, 7, 11].into_iter().enumerate() {
            assert_eq!(s.coeff(n), t.pow(n as u32).scale(&int(c)));
        }
    }

    #[test]
    fn kappa_two_expansion() {
        let ctx = KappaContext::new(int(2)).unwrap();
        let s = ptilde_series(&ctx.scalars(), 3);
        let t = ctx.tau();
        for (n, c) in [1, 2, 6, 14].into_iter().enumerate() {
            assert_eq!(s.coeff(n), t.pow(n as u32).scale(&int(c)));
        }
    }

    #[test]
    fn series_matches_closed_coefficients() {
        for k in kappas() {
            let ctx = KappaContext::new(k).unwrap();
            let s = ptilde_series(&ctx.scalars(), 30);
            assert_eq!(s.coeff(0), QuadNumber::one(ctx.radicand()));
            for n in 1..=30 {
                assert_eq!(s.coeff(n), ptilde_coeff_closed(&ctx, n).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn closed_coefficient_examples() {
        let one = KappaContext::new(int(1)).unwrap();
        assert_eq!(ptilde_coeff_closed(&one, 2).unwrap(), one.tau().pow(2).scale(&int(3)));
        assert_eq!(ptilde_coeff_closed(&one, 5).unwrap(), one.tau().pow(5).scale(&int(11)));
        assert!(ptilde_coeff_closed(&one, 0).is_err());
        let three = KappaContext::new(int(3)).unwrap();
        assert_eq!(ptilde_coeff_closed(&three, 1).unwrap(), three.tau().scale(&int(3)));
    }

    #[test]
    fn named_coefficients_agree_with_series() {
        for k in kappas() {
            let ctx = KappaContext::new(k).unwrap();
            let ks = ctx.scalars();
            let s = ptilde_series(&ks, 3);
            assert_eq!((s.coeff(1), s.coeff(2), s.coeff(3)), (ks.p1(), ks.p2(), ks.p3()));
        }
    }

    #[test]
    fn subordination_degenerate_cases() {
        let ctx = KappaContext::new(int(2)).unwrap();
        let ks = ctx.scalars();
        let r = ctx.radicand();
        let q = |v: i64| QuadNumber::rational(int(v), r);
        let zero = subordination_expand(&ks, &CaratheodoryPrefix::new(q(0), q(0), q(0)), 3);
        assert_eq!(zero, TruncatedSeries::one(&q(1), 3));
        // h = (1+z)/(1−z) gives u = z, so the expansion is p̃ itself.
        let ident = subordination_expand(&ks, &CaratheodoryPrefix::new(q(2), q(2), q(2)), 3);
        assert_eq!(ident, ptilde_series(&ks, 3));
    }

    #[test]
    fn schwarz_of_extreme_point_is_identity() {
        let r = crate::quadfield::Radicand::new(int(5)).unwrap();
        let two = QuadNumber::rational(int(2), &r);
        let w = SchwarzPrefix::from_caratheodory(&CaratheodoryPrefix::new(two.clone(), two.clone(), two));
        assert_eq!(w.w1, QuadNumber::one(&r));
        assert!(w.w2.is_zero() && w.w3.is_zero());
    }

    #[test]
    fn probe_on_the_disk() {
        let ctx = KappaContext::new(int(1)).unwrap();
        let beta = 5f64.sqrt() / 10.0;
        let p = min_real_part_probe(&ctx, 0.5, 256, 128).unwrap();
        assert!(p.min_real_part >= beta - 1e-9);
        let p = min_real_part_probe(&ctx, 0.95, 1024, 128).unwrap();
        assert!(p.min_real_part >= beta - 1e-6, "{p:?}");
        let small = min_real_part_probe(&ctx, 1e-6, 64, 128).unwrap();
        assert!((small.min_real_part - 1.0).abs() < 1e-5);
        assert!(min_real_part_probe(&ctx, 1.0, 64, 128).is_err());
        assert!(min_real_part_probe(&ctx, 0.5, 4, 128).is_err());
    }

    #[test]
    fn grid_has_expected_size_and_bound() {
        let g = caratheodory_grid(8, 128);
        assert_eq!(g.len(), 64);
        assert!(g.iter().all(|c| c.within_lemma_bound(128, 1e-12)));
        assert_eq!(g[0].c1.to_f64_pair(), (2.0, 0.0));
        assert_eq!(g[4].c1.to_f64_pair(), (-2.0, 0.0));
    }

    #[test]
    fn lemma_bound_check() {
        let r = crate::quadfield::Radicand::new(int(5)).unwrap();
        let q = |v: Rational| QuadNumber::rational(v, &r);
        assert!(CaratheodoryPrefix::checked(q(int(2)), q(int(-2)), q(int(0)), 128).is_ok());
        assert!(CaratheodoryPrefix::checked(q(rat(5, 2)), q(int(0)), q(int(0)), 128).is_err());
        let x = MpComplex::from_f64(1.5, 1.5, 128);
        assert!(!CaratheodoryPrefix::new(x.clone(), x.zero_like(), x.zero_like()).within_lemma_bound(128, 0.0));
    }

    fn arb_prefix() -> impl Strategy<Value = (i64, i64, i64, i64, i64, i64)> {
        (-8i64..=8, 1i64..=4, -8i64..=8, 1i64..=4, -8i64..=8, 1i64..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn expansion_matches_composition((n1, d1, n2, d2, n3, d3) in arb_prefix(), k in 0usize..4) {
            let ctx = KappaContext::new(kappas()[k].clone()).unwrap();
            let ks = ctx.scalars();
            let q = |n, d| QuadNumber::rational(rat(n, d), ctx.radicand());
            let c = CaratheodoryPrefix::new(q(n1, d1), q(n2, d2), q(n3, d3));
            let oracle = ptilde_series(&ks, 3).compose(&SchwarzPrefix::from_caratheodory(&c).series(3)).unwrap();
            prop_assert_eq!(subordination_expand(&ks, &c, 3), oracle.clone());

            let p = 128;
            let fks = ctx.float_scalars(p);
            let fc = CaratheodoryPrefix::new(
                MpComplex::from_quad(&c.c1, p), MpComplex::from_quad(&c.c2, p), MpComplex::from_quad(&c.c3, p));
            let fo = ptilde_series(&fks, 3).compose(&SchwarzPrefix::from_caratheodory(&fc).series(3)).unwrap();
            prop_assert!(subordination_expand(&fks, &fc, 3).max_residual(&fo) < 1e-12);
        }

        #[test]
        fn schwarz_round_trip((n1, d1, n2, d2, n3, d3) in arb_prefix()) {
            let r = crate::quadfield::Radicand::new(int(5)).unwrap();
            let q = |n, d| QuadNumber::rational(rat(n, d), &r);
            let c = CaratheodoryPrefix::new(q(n1, d1), q(n2, d2), q(n3, d3));
            let w = SchwarzPrefix::from_caratheodory(&c);
            prop_assert_eq!(w.to_caratheodory(), c.clone());
            // Independent route: (1 + u)/(1 − u) as a series quotient.
            let u = w.series(3);
            let one = TruncatedSeries::one(&c.c1, 3);
            let h = (&one + &u).checked_div(&(&one - &u)).unwrap();
            prop_assert_eq!(h, c.series(3));
        }
    }
}
