//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Values that the library computes are checked against oracles
//! assembled here from more elementary pieces where possible.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kfib_core::bounds::{self, BoundFamily};
use kfib_core::rational::{int, rat};
use kfib_core::shelllike::{min_real_part_probe, ptilde_series};
use kfib_core::verify::{self, SweepConfig};
use kfib_core::{KappaContext, QuadNumber, Rational, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn kappas() -> [Rational; 4] {
    [int(1), int(2), int(3), rat(1, 2)]
}

/// Series coefficients of the generating function against `(F_{n−1} + F_{n+1})τⁿ`.
fn generating_function() -> Outcome {
    let start = Instant::now();
    for k in kappas() {
        let ctx = KappaContext::new(k.clone()).map_err(|e| e.to_string())?;
        let s = ptilde_series(&ctx.scalars(), 30);
        for n in 1..=30 {
            let want = (ctx.kfib_rec(n - 1) + ctx.kfib_rec(n + 1)) * ctx.tau().pow(n as u32);
            ensure(s.coeff(n) == want, format!("kappa={k} n={n}: {} != {want}", s.coeff(n)))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("4 kappas x 30 coefficients exact in {:.2?}", start.elapsed()))
}

fn kappa_one_expansion() -> Outcome {
    let ctx = KappaContext::new(int(1)).map_err(|e| e.to_string())?;
    let s = ptilde_series(&ctx.scalars(), 5);
    let t = ctx.tau();
    let want = [1, 1, 3, 4, 7, 11];
    for (n, m) in want.into_iter().enumerate() {
        ensure(s.coeff(n) == t.pow(n as u32).scale(&int(m)), format!("coefficient {n}"))?;
    }
    Ok("1, tau, 3tau^2, 4tau^3, 7tau^4, 11tau^5".into())
}

fn reversion_oracle() -> Outcome {
    let ctx = KappaContext::new(int(1)).map_err(|e| e.to_string())?;
    let r = ctx.radicand();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut q = || QuadNumber::rational(Rational::from(rng.gen_range(-40..=40)) / Rational::from(rng.gen_range(1..=9)), r);
    for case in 0..100 {
        let (a2, a3, a4) = (q(), q(), q());
        let one = QuadNumber::one(r);
        let zero = QuadNumber::zero(r);
        let f = TruncatedSeries::new(vec![zero, one, a2.clone(), a3.clone(), a4.clone()]).map_err(|e| e.to_string())?;
        let b2 = -a2.clone();
        let b3 = a2.clone() * a2.clone() * QuadNumber::rational(int(2), r) - a3.clone();
        let b4 = -(a2.pow(3).scale(&int(5)) - (a2.clone() * a3.clone()).scale(&int(5)) + a4.clone());
        let want = [b2, b3, b4];
        for order in 2..=4 {
            let g = f.truncate(order).revert().map_err(|e| e.to_string())?;
            for k in 2..=order {
                ensure(g.coeff(k) == want[k - 2], format!("case {case} order {order} coefficient {k}"))?;
            }
        }
    }
    Ok("100 random exact prefixes, orders 2-4".into())
}

fn proof_chain() -> Outcome {
    let start = Instant::now();
    let recs = verify::run_proof_chain(&SweepConfig::default()).map_err(|e| e.to_string())?;
    let failed: Vec<_> = recs.iter().filter(|r| !r.pass).collect();
    ensure(failed.is_empty(), format!("{} failing records, first {:?}", failed.len(), failed.first()))?;
    let exact = recs.iter().filter(|r| r.mode == kfib_core::Mode::Exact).count();
    let worst = recs.iter().filter(|r| r.mode == kfib_core::Mode::Float).map(|r| r.residual).fold(0.0, f64::max);
    ensure(exact > 0 && exact < recs.len(), "both modes must run")?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "{} records ({exact} exact with zero residual), worst float residual {worst:.1e}, {:.2?}",
        recs.len(),
        start.elapsed()
    ))
}

fn structure_records() -> Result<Vec<verify::VerificationRecord>, String> {
    verify::specialization_suite(&SweepConfig::default()).map_err(|e| e.to_string())
}

fn specialization(recs: &[verify::VerificationRecord]) -> Outcome {
    let pairs: Vec<_> = recs.iter().filter(|r| r.check_id.starts_with("specialization.")).collect();
    ensure(pairs.len() == 4 * 20 * 9, format!("expected 720 identity checks, got {}", pairs.len()))?;
    let bad: Vec<_> = pairs.iter().filter(|r| !r.pass).collect();
    ensure(bad.is_empty(), format!("{} failing, first {:?}", bad.len(), bad.first()))?;
    Ok("9 identities x 4 kappas x 20 tuples, exact".into())
}

fn a3_consistency(recs: &[verify::VerificationRecord]) -> Outcome {
    for fam in ["W", "R", "B", "P"] {
        let id = format!("a3-structure.{fam}");
        let rs: Vec<_> = recs.iter().filter(|r| r.check_id == id).collect();
        ensure(rs.len() == 100, format!("{fam}: {} tuples", rs.len()))?;
        ensure(rs.iter().all(|r| r.pass && r.residual == 0.0), format!("{fam}: a3 bound != flat + a2 bound^2"))?;
    }
    Ok("a3 bound = flat + a2 bound^2 for 100 tuples per family".into())
}

fn fekete_structure(recs: &[verify::VerificationRecord]) -> Outcome {
    let mut n = 0;
    for f in BoundFamily::ALL {
        for prefix in ["fekete-continuity", "fekete-mu1"] {
            let id = format!("{prefix}.{f}");
            let rs: Vec<_> = recs.iter().filter(|r| r.check_id == id).collect();
            ensure(!rs.is_empty() && rs.iter().all(|r| r.pass), format!("{id} failed"))?;
            n += rs.len();
        }
    }
    let ctx = KappaContext::new(int(1)).map_err(|e| e.to_string())?;
    let r = bounds::cor_sl(&ctx).map_err(|e| e.to_string())?;
    let at1 = bounds::fekete(&r, &int(1)).map_err(|e| e.to_string())?;
    ensure(at1.branch == bounds::Branch::Flat, "mu = 1 must be flat")?;
    Ok(format!("{n} exact checks across 10 families"))
}

fn domination() -> Outcome {
    let start = Instant::now();
    let sums = verify::run_domination(&SweepConfig::default()).map_err(|e| e.to_string())?;
    ensure(sums.len() == 40, format!("expected 40 sweeps, got {}", sums.len()))?;
    let mut worst: f64 = 0.0;
    let mut corner_min: f64 = f64::INFINITY;
    for s in &sums {
        ensure(s.valid && s.points == 64 * 64, format!("{} {}: invalid or wrong grid", s.family, s.parameters))?;
        ensure(s.violation_count == 0, format!("{} {}: {} violations", s.family, s.parameters, s.violation_count))?;
        ensure(s.corner_ratio_a2 >= 1.0 - 1e-9, format!("{} {}: corner ratio {}", s.family, s.parameters, s.corner_ratio_a2))?;
        worst = worst.max(s.max_ratio);
        corner_min = corner_min.min(s.corner_ratio_a2);
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "40 sweeps x 4096 points, max ratio {worst:.12}, min corner ratio {corner_min:.12}, {:.2?}",
        start.elapsed()
    ))
}

fn real_part_probe() -> Outcome {
    let ctx = KappaContext::new(int(1)).map_err(|e| e.to_string())?;
    let p = min_real_part_probe(&ctx, 0.95, 1024, 128).map_err(|e| e.to_string())?;
    let floor = 5f64.sqrt() / 10.0 - 1e-6;
    ensure(p.min_real_part >= floor, format!("min Re = {}", p.min_real_part))?;
    Ok(format!("min Re = {:.9} at theta = {:.6}", p.min_real_part, p.theta))
}

fn typo_audit() -> Outcome {
    let r = verify::typo_audit().map_err(|e| e.to_string())?;
    let ids: Vec<_> = r.discrepancies.iter().map(|f| f.id.as_str()).collect();
    ensure(
        ids == ["B.a2-bound-squared", "W.definition.subordination", "P.inverse-operator.derivative"],
        format!("discrepancies {ids:?}"),
    )?;
    Ok(format!("3 discrepancies over {} displays, {} notes", r.displays_checked, r.notes.len()))
}

fn main() -> ExitCode {
    let structure = structure_records();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("generating-function identity", Box::new(generating_function)),
        ("kappa = 1 expansion", Box::new(kappa_one_expansion)),
        ("reversion oracle", Box::new(reversion_oracle)),
        ("proof-chain replay", Box::new(proof_chain)),
        ("specialization suite", Box::new(|| specialization(structure.as_ref()?))),
        ("a3 consistency", Box::new(|| a3_consistency(structure.as_ref()?))),
        ("Fekete-Szego continuity and structure", Box::new(|| fekete_structure(structure.as_ref()?))),
        ("domination sweep", Box::new(domination)),
        ("real-part probe", Box::new(real_part_probe)),
        ("typo audit", Box::new(typo_audit)),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", n + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL {name}: {why}", n + 1);
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
