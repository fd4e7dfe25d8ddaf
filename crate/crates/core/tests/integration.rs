use kfib_core::bounds::{self, BoundFamily, BoundParams};
use kfib_core::functionals::{ClassSpec, Family};
use kfib_core::parallel::Execution;
use kfib_core::rational::{int, rat};
use kfib_core::shelllike::CaratheodoryPrefix;
use kfib_core::verify::{self, SweepConfig};
use kfib_core::{KappaContext, MpComplex, QuadNumber, Rational};
use proptest::prelude::*;

/// `|a₂|` bound of the `W` family in plain f64, built from τ directly.
fn w_a2_oracle(k: f64, g: f64, l: f64, a: f64) -> Option<f64> {
    let t = (k - (k * k + 4.0).sqrt()) / 2.0;
    let x = k - (k * k + 2.0) * t;
    let den = g * k * k * t * (1.0 + 2.0 * a + 2.0 * l) + x * (1.0 + a).powi(2);
    (den > 0.0).then(|| g.abs() * (k * t).abs() * k.sqrt() / den.sqrt())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w_bound_matches_float_oracle(k in 1i64..=12, kd in 1i64..=4, g in 1i64..=8, l in 0i64..=8, a in 0i64..=8) {
        let ctx = KappaContext::new(rat(k, kd)).unwrap();
        let (gf, lf, af) = (g as f64 / 4.0, l as f64 / 4.0, a as f64 / 4.0);
        let r = bounds::bounds_w(&ctx, &rat(g, 4), &rat(l, 4), &rat(a, 4)).unwrap();
        let want = w_a2_oracle(k as f64 / kd as f64, gf, lf, af);
        match (r.a2_bound_f64(), want) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12 * y.max(1.0), "{x} vs {y}"),
            (None, None) => {}
            (x, y) => prop_assert!(false, "validity differs: {x:?} vs {y:?}"),
        }
    }

    #[test]
    fn float_replay_tracks_exact_replay(k in 1i64..=4, c1 in -16i64..=16, c2 in -16i64..=16, d2 in -16i64..=16, fam in 0usize..4) {
        let ctx = KappaContext::new(int(k)).unwrap();
        let spec = match Family::ALL[fam] {
            Family::W => ClassSpec::w(rat(1, 2), int(1), int(1)).unwrap(),
            Family::R => ClassSpec::r(rat(1, 2), int(2)).unwrap(),
            Family::B => ClassSpec::b(int(2)).unwrap(),
            Family::P => ClassSpec::p(rat(1, 2)).unwrap(),
        };
        let r = ctx.radicand();
        let q = |n: i64| QuadNumber::rational(rat(n, 8), r);
        let exact = verify::replay_proof_chain(
            &ctx, &spec, &ctx.scalars(),
            &CaratheodoryPrefix::new(q(c1), q(c2), q(0)), &q(d2), 1e-10, 128,
        ).unwrap();
        let m = |n: i64| MpComplex::from_rational(&rat(n, 8), 128);
        let float = verify::replay_proof_chain(
            &ctx, &spec, &ctx.float_scalars(128),
            &CaratheodoryPrefix::new(m(c1), m(c2), m(0)), &m(d2), 1e-10, 128,
        ).unwrap();
        prop_assert_eq!(exact.len(), float.len());
        for (e, f) in exact.iter().zip(&float) {
            prop_assert_eq!(&e.check_id, &f.check_id);
            prop_assert!(e.pass && f.pass, "{:?} / {:?}", e, f);
        }
    }

    #[test]
    fn fekete_value_is_monotone_away_from_one(k in 1i64..=6, steps in 1i64..=20) {
        let ctx = KappaContext::new(int(k)).unwrap();
        let r = bounds::cor_ksl(&ctx).unwrap();
        let near = bounds::fekete(&r, &(Rational::ONE + rat(steps, 4))).unwrap();
        let far = bounds::fekete(&r, &(Rational::ONE + rat(steps + 1, 4))).unwrap();
        prop_assert!((&far.value - &near.value).sign().is_ge());
        let mirrored = bounds::fekete(&r, &(Rational::ONE - rat(steps, 4))).unwrap();
        prop_assert_eq!(mirrored.value, near.value);
    }
}

#[test]
fn empty_config_is_default_and_unknown_keys_are_rejected() {
    let cfg: SweepConfig = serde_json::from_str("{}").unwrap();
    assert_eq!(cfg, SweepConfig::default());
    assert!(serde_json::from_str::<SweepConfig>(r#"{"tolerence": 1e-9}"#).is_err());
    let cfg: SweepConfig = serde_json::from_str(r#"{"execution": "sequential", "modes": ["exact"]}"#).unwrap();
    assert_eq!(cfg.execution, Execution::Sequential);
}

#[test]
fn sweeps_agree_across_execution_modes_for_every_family() {
    let base = SweepConfig { caratheodory_grid: 6, mu_steps: 8, ..SweepConfig::default() };
    let ctx = KappaContext::new(int(2)).unwrap();
    for spec in [
        ClassSpec::w(rat(1, 4), int(1), int(0)).unwrap(),
        ClassSpec::r(int(1), int(1)).unwrap(),
        ClassSpec::b(int(3)).unwrap(),
        ClassSpec::p(int(1)).unwrap(),
    ] {
        let par = verify::domination_sweep(&ctx, &spec, &base).unwrap();
        let seq = verify::domination_sweep(&ctx, &spec, &SweepConfig { execution: Execution::Sequential, ..base.clone() }).unwrap();
        assert_eq!(par, seq);
        assert!(par.pass, "{par:?}");
    }
}

#[test]
fn extreme_data_saturates_the_bound_in_float_mode() {
    let ctx = KappaContext::new(int(2)).unwrap();
    let spec = ClassSpec::p(int(1)).unwrap();
    let report = bounds::theorem_bounds(&ctx, &spec).unwrap();
    let ks = ctx.float_scalars(128);
    let two = MpComplex::from_rational(&int(2), 128);
    let recs = verify::replay_proof_chain(
        &ctx, &spec, &ks,
        &CaratheodoryPrefix::new(two.clone(), two.clone(), two.clone()), &two, 1e-10, 128,
    ).unwrap();
    assert!(recs.iter().all(|r| r.pass));
    let a2sq = recs.iter().find(|r| r.check_id == "P.a2sq.bound").unwrap();
    let bound = report.a2_bound_sq.as_ref().unwrap().to_f64();
    assert!((a2sq.computed_lhs.parse::<f64>().unwrap() - bound).abs() < 1e-15);
    assert_eq!(report, bounds::evaluate(BoundFamily::P, &ctx, &BoundParams { lambda: int(1), ..BoundParams::default() }).unwrap());
}
