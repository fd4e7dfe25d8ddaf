//! Executable checks of the coefficient derivations and bounds.
//!
//! * [`replay_proof_chain`] re-derives `a₂`, `a₂²` and `a₃` for given
//!   Carathéodory data along every route the derivations take and compares
//!   each with its closed form, then checks the results against the bounds.
//! * [`domination_sweep`] evaluates the coefficient formulas over a grid of
//!   Carathéodory data and reports the largest bound ratios.
//! * [`specialization_suite`] checks the identities between theorem families
//!   and named subclasses, the `a₃` bound structure and Fekete–Szegő
//!   continuity.
//! * [`typo_audit`] compares theorem statements with the derived bounds.
//!
//! The checks work at the level of the coefficient algebra given Carathéodory
//! data; they do not certify that a bi-univalent function with those
//! coefficients exists.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundFamily, BoundParams, BoundReport, Branch};
use crate::error::{usage, Result};
use crate::fibonacci::{KappaContext, KappaScalars};
use crate::functionals::{
    apply_functional, coefficient_equations, elimination, form_residuals, printed_forms, ClassSpec,
    CoefficientPair, Family,
};
use crate::parallel::{map_ordered, Execution};
use crate::quadfield::QuadNumber;
use crate::rational::{mp_to_f64, parse_rational, Mp, Rational};
use crate::scalar::{Mode, MpComplex, Scalar};
use crate::shelllike::{caratheodory_grid, subordination_expand, CaratheodoryPrefix};

/// Sweep and suite configuration. Every field has a default, so an empty
/// TOML document is a valid configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Rationals as `p/q` or decimal strings.
    pub kappa_list: Vec<String>,
    /// Theorem families by name (`W`, `R`, `B`, `P`).
    pub families: Vec<String>,
    /// Random valid parameter tuples per family in the domination sweep.
    pub tuples_per_family: usize,
    /// Random tuples per family in the proof-chain replay.
    pub replay_tuples: usize,
    /// Random tuples per `κ` in the specialization suite.
    pub specialization_tuples: usize,
    /// Random tuples per family for the `a₃` and Fekete–Szegő structure checks.
    pub structure_tuples: usize,
    /// Number of extreme points `m`; the grid has `m + m(m−1)` points.
    pub caratheodory_grid: usize,
    pub mu_from: String,
    pub mu_to: String,
    pub mu_steps: usize,
    pub tolerance: f64,
    /// Arithmetic modes for the replay; the sweep always runs in float mode.
    pub modes: Vec<Mode>,
    pub precision_bits: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kappa_list: ["1", "2", "3", "1/2"].map(String::from).to_vec(),
            families: ["W", "R", "B", "P"].map(String::from).to_vec(),
            tuples_per_family: 10,
            replay_tuples: 50,
            specialization_tuples: 20,
            structure_tuples: 100,
            caratheodory_grid: 8,
            mu_from: "-3".into(),
            mu_to: "5".into(),
            mu_steps: 16,
            tolerance: 1e-10,
            modes: vec![Mode::Exact, Mode::Float],
            precision_bits: crate::rational::DEFAULT_PRECISION_BITS,
            seed: 0x6b66_6962,
            execution: Execution::Parallel,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return usage("tolerance must be a positive finite number");
        }
        if self.kappa_list.is_empty() || self.families.is_empty() || self.modes.is_empty() {
            return usage("kappa_list, families and modes must be non-empty");
        }
        if self.caratheodory_grid < 2 {
            return usage("caratheodory_grid needs at least 2 extreme points");
        }
        if self.precision_bits < 64 {
            return usage("precision_bits must be at least 64");
        }
        for k in self.kappas()? {
            if k <= Rational::ZERO {
                return usage("every kappa must be positive");
            }
        }
        self.family_list()?;
        self.mu_grid()?;
        Ok(())
    }

    pub fn kappas(&self) -> Result<Vec<Rational>> {
        self.kappa_list.iter().map(|s| parse_rational(s)).collect()
    }

    pub fn family_list(&self) -> Result<Vec<Family>> {
        self.families.iter().map(|s| parse_family(s)).collect()
    }

    /// `mu_steps + 1` equally spaced rationals from `mu_from` to `mu_to`.
    pub fn mu_grid(&self) -> Result<Vec<Rational>> {
        let (a, b) = (parse_rational(&self.mu_from)?, parse_rational(&self.mu_to)?);
        if self.mu_steps == 0 {
            return Ok(vec![a]);
        }
        let step = (b - &a) / Rational::from(self.mu_steps);
        Ok((0..=self.mu_steps).map(|k| &a + &step * Rational::from(k)).collect())
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    Family::ALL
        .into_iter()
        .find(|f| f.name().eq_ignore_ascii_case(s))
        .map_or_else(|| usage(format!("unknown theorem family {s:?}")), Ok)
}

/// One checked equation or inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub check_id: String,
    pub parameters: String,
    pub mode: Mode,
    pub computed_lhs: String,
    pub computed_rhs: String,
    pub residual: f64,
    pub pass: bool,
}

fn passes(mode: Mode, residual: f64, tolerance: f64) -> bool {
    match mode {
        Mode::Exact => residual == 0.0,
        Mode::Float => residual <= tolerance,
    }
}

fn eq_record<S: Scalar>(id: String, params: &str, lhs: &S, rhs: &S, tolerance: f64) -> VerificationRecord {
    let residual = lhs.residual(rhs);
    VerificationRecord {
        check_id: id,
        parameters: params.to_owned(),
        mode: S::MODE,
        computed_lhs: lhs.to_string(),
        computed_rhs: rhs.to_string(),
        residual,
        pass: passes(S::MODE, residual, tolerance),
    }
}

/// `|value| ≤ bound`, with residual the relative excess (0 when it holds).
fn le_record<S: Scalar>(
    id: String,
    params: &str,
    value: &S,
    bound: &QuadNumber,
    precision: usize,
    tolerance: f64,
) -> VerificationRecord {
    let b = bound.to_mp(precision);
    let (residual, lhs) = match S::MODE {
        Mode::Exact => {
            let abs = value.abs_real().expect("exact values are real");
            let excess = abs.clone() - value.from_quad_like(bound);
            let r = match excess.real_sign().expect("exact values are real") {
                Ordering::Greater => (excess.re_f64() / bound.to_f64()).max(f64::MIN_POSITIVE),
                _ => 0.0,
            };
            (r, abs.to_string())
        }
        Mode::Float => {
            let m = value.magnitude(precision);
            let r = mp_to_f64(&((m.clone() - b.clone()) / b.clone())).max(0.0);
            (r, format!("{:.17e}", mp_to_f64(&m)))
        }
    };
    VerificationRecord {
        check_id: id,
        parameters: params.to_owned(),
        mode: S::MODE,
        computed_lhs: lhs,
        computed_rhs: format!("{:.17e}", mp_to_f64(&b)),
        residual,
        pass: passes(S::MODE, residual, tolerance),
    }
}

/// The coefficient formulas in the form the derivations print them, per family.
struct ClosedForms<S> {
    a2: S,
    a2sq_c1_route: S,
    a2sq_added: S,
    a3: S,
}

fn closed_forms<S: Scalar>(
    spec: &ClassSpec,
    ks: &KappaScalars<S>,
    c: &CaratheodoryPrefix<S>,
    d1: &S,
    d2: &S,
) -> ClosedForms<S> {
    let like = &ks.kappa;
    let q = |r: &Rational| like.from_rational_like(r);
    let n = |k: i64| like.from_i64_like(k);
    let (k, t) = (ks.kappa.clone(), ks.tau.clone());
    let kt = k.clone() * t.clone();
    let k2t = k.clone() * kt.clone();
    let k3t2 = k2t.clone() * kt.clone();
    let x = ks.shell_term();
    let (g, l, a) = (q(&spec.gamma), q(&spec.lambda), q(&spec.alpha));
    let one = n(1);
    let sum_c1 = c.c1.clone() * c.c1.clone() + d1.clone() * d1.clone();
    let plus = c.c2.clone() + d2.clone();
    let minus = c.c2.clone() - d2.clone();
    // (scale on a₂, z-coefficient divisor, added-route value, a₃ increment)
    let (scale, zdiv, added, inc) = match spec.family {
        Family::W => {
            let big_a = one.clone() + n(2) * a.clone() + n(2) * l.clone();
            let oa = one.clone() + a.clone();
            let den = g.clone() * k2t.clone() * big_a.clone() + x * oa.clone() * oa.clone();
            (
                g.clone(),
                oa,
                g.clone() * g.clone() * plus * k3t2 / (n(4) * den),
                g * minus * kt.clone() / (n(4) * big_a),
            )
        }
        Family::R => {
            let ol = one.clone() + l.clone();
            let tl = n(2) + l;
            let m = g.clone() * k2t.clone() * tl.clone() * ol.clone() + n(2) * ol.clone() * ol.clone() * x;
            (
                g.clone(),
                ol,
                g.clone() * g.clone() * plus * k3t2 / (n(2) * m),
                g * minus * kt.clone() / (n(4) * tl),
            )
        }
        Family::B => {
            let tl = n(2) * l.clone() - one.clone();
            let den = l.clone() * tl.clone() * k2t.clone() + x * tl.clone() * tl.clone();
            (
                one.clone(),
                tl,
                plus * k3t2 / (n(4) * den),
                minus * kt.clone() / (n(4) * (n(3) * l - one)),
            )
        }
        Family::P => {
            let ol = one.clone() + l.clone();
            let quad = one.clone() + n(2) * l.clone() - l.clone() * l.clone();
            let den = k2t.clone() * quad + x * ol.clone() * ol.clone();
            (
                one.clone(),
                ol,
                plus * k3t2 / (n(4) * den),
                minus * kt.clone() / (n(8) * (one + n(2) * l)),
            )
        }
    };
    ClosedForms {
        a2: scale.clone() * kt.clone() * c.c1.clone() / (n(2) * zdiv.clone()),
        a2sq_c1_route: scale.clone() * scale * kt.clone() * kt * sum_c1 / (n(8) * zdiv.clone() * zdiv),
        a3: inc + added.clone(),
        a2sq_added: added,
    }
}

/// Replays the coefficient derivation for one class and one choice of
/// Carathéodory data, with `d₁ = −c₁` and `d = (d₁, d₂)`.
///
/// Records, in order: `a₂` from the `z` equations, `a₂²` by the `c₁` route,
/// `a₂²` by adding the `z²` equations and its bound, `a₃` by subtracting
/// them and its bound, the printed forms against the operator on `f` and
/// `f⁻¹`, and the reconstructed prefix against the subordination expansion.
pub fn replay_proof_chain<S: Scalar>(
    ctx: &KappaContext,
    spec: &ClassSpec,
    ks: &KappaScalars<S>,
    c: &CaratheodoryPrefix<S>,
    d2: &S,
    tolerance: f64,
    precision: usize,
) -> Result<Vec<VerificationRecord>> {
    let d1 = -c.c1.clone();
    let d = CaratheodoryPrefix::new(d1.clone(), d2.clone(), d2.zero_like());
    let sol = coefficient_equations(spec, ks, c, &d, tolerance)?;
    let closed = closed_forms(spec, ks, c, &d1, d2);
    let report = bounds::theorem_bounds(ctx, spec)?;
    let fam = spec.family.name();
    let params = format!("{} kappa={}", spec.describe(), ctx.kappa());
    let id = |s: &str| format!("{fam}.{s}");
    let mut out = vec![
        eq_record(id("a2.z-equations"), &params, &closed.a2, &sol.a2_from_d1, tolerance),
        eq_record(
            id("a2sq.c1-route"),
            &params,
            &closed.a2sq_c1_route,
            &(sol.a2_from_c1.clone() * sol.a2_from_c1.clone()),
            tolerance,
        ),
        eq_record(id("a2sq.added"), &params, &closed.a2sq_added, &sol.a2sq_added, tolerance),
    ];
    if let Some(b) = &report.a2_bound_sq {
        out.push(le_record(id("a2sq.bound"), &params, &sol.a2sq_added, b, precision, tolerance));
    }
    out.push(eq_record(id("a3.subtracted"), &params, &closed.a3, &sol.a3, tolerance));
    if let Some(b) = &report.a3_bound {
        out.push(le_record(id("a3.bound"), &params, &sol.a3, b, precision, tolerance));
    }

    let pair = CoefficientPair::new(sol.a2_from_c1.clone(), sol.a3.clone());
    let r = form_residuals(spec, &pair)?;
    for (name, res) in [("forms.f", r[0].max(r[1])), ("forms.g", r[2].max(r[3]))] {
        out.push(VerificationRecord {
            check_id: id(name),
            parameters: params.clone(),
            mode: S::MODE,
            computed_lhs: "printed linear forms".into(),
            computed_rhs: "operator expansion".into(),
            residual: res,
            pass: passes(S::MODE, res, tolerance),
        });
    }

    let prefix = CoefficientPair::new(sol.a2_from_c1.clone(), sol.a3_f_side.clone());
    let lhs = apply_functional(spec, &prefix.series(3))?;
    let rhs = subordination_expand(ks, c, 2);
    for k in 1..=2 {
        out.push(eq_record(id(&format!("subordination.z{k}")), &params, &lhs.coeff(k), &rhs.coeff(k), tolerance));
    }
    Ok(out)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::from(n) / Rational::from(d)
}

/// A random parameter tuple for `family` whose bounds are valid at `ctx`.
/// With `integral`, `λ` is an integer; otherwise it has a large prime
/// denominator so float mode sees generic real values.
pub fn random_spec(family: Family, ctx: &KappaContext, rng: &mut ChaCha8Rng, integral: bool) -> Result<ClassSpec> {
    for _ in 0..10_000 {
        let gamma = ratio(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let alpha = if integral { ratio(rng.gen_range(0..=12), 4) } else { ratio(rng.gen_range(0..=267), 89) };
        let spec = match family {
            Family::W | Family::R => {
                let lambda = if integral { Rational::from(rng.gen_range(0..=3)) } else { ratio(rng.gen_range(0..=291), 97) };
                if family == Family::W {
                    ClassSpec::w(gamma, lambda, alpha)?
                } else {
                    ClassSpec::r(gamma, lambda)?
                }
            }
            Family::B => {
                let extra = if integral { Rational::from(rng.gen_range(0..=3)) } else { ratio(rng.gen_range(0..=291), 97) };
                ClassSpec::b(Rational::ONE + extra)?
            }
            Family::P => ClassSpec::p(if integral { Rational::from(rng.gen_range(0..=1)) } else { ratio(rng.gen_range(0..=97), 97) })?,
        };
        if bounds::theorem_bounds(ctx, &spec)?.valid {
            return Ok(spec);
        }
    }
    usage(format!("no valid {} parameters found at kappa = {}", family, ctx.kappa()))
}

fn exact_prefix(ctx: &KappaContext, c1: Rational, c2: Rational) -> CaratheodoryPrefix<QuadNumber> {
    let r = ctx.radicand();
    CaratheodoryPrefix::new(QuadNumber::rational(c1, r), QuadNumber::rational(c2, r), QuadNumber::zero(r))
}

/// Random complex value with modulus at most 2.
fn random_disk(rng: &mut ChaCha8Rng, precision: usize) -> MpComplex {
    let r = 2.0 * rng.gen::<f64>();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    MpComplex::from_f64(r * theta.cos(), r * theta.sin(), precision)
}

/// Proof-chain replay over random valid tuples for every configured family
/// and mode. Exact mode uses integer `λ` and rational data in `[−2, 2]`, and
/// always includes the extreme corner `c₁ = c₂ = d₂ = 2` and the zero point.
pub fn run_proof_chain(cfg: &SweepConfig) -> Result<Vec<VerificationRecord>> {
    cfg.validate()?;
    let kappas = cfg.kappas()?;
    let ctxs: Vec<_> = kappas.into_iter().map(KappaContext::new).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (fi, family) in cfg.family_list()?.into_iter().enumerate() {
        for &mode in &cfg.modes {
            let mut rng = rng_for(cfg.seed, 16 * fi as u64 + mode as u64);
            for n in 0..cfg.replay_tuples {
                let ctx = &ctxs[n % ctxs.len()];
                let spec = random_spec(family, ctx, &mut rng, mode == Mode::Exact)?;
                let job_seed: u64 = rng.gen();
                jobs.push((n, ctx, spec, mode, job_seed));
            }
        }
    }
    let results = map_ordered(cfg.execution, &jobs, |(n, ctx, spec, mode, job_seed)| {
        let mut rng = rng_for(*job_seed, 1);
        match mode {
            Mode::Exact => {
                let ks = ctx.scalars();
                let q = |rng: &mut ChaCha8Rng| ratio(rng.gen_range(-16..=16), 8);
                let (c, d2) = match n {
                    0 => (exact_prefix(ctx, Rational::from(2), Rational::from(2)), Rational::from(2)),
                    1 => (exact_prefix(ctx, Rational::ZERO, Rational::ZERO), Rational::ZERO),
                    _ => (exact_prefix(ctx, q(&mut rng), q(&mut rng)), q(&mut rng)),
                };
                let d2 = QuadNumber::rational(d2, ctx.radicand());
                replay_proof_chain(ctx, spec, &ks, &c, &d2, cfg.tolerance, cfg.precision_bits)
            }
            Mode::Float => {
                let p = cfg.precision_bits;
                let ks = ctx.float_scalars(p);
                let c = CaratheodoryPrefix::new(random_disk(&mut rng, p), random_disk(&mut rng, p), MpComplex::from_f64(0.0, 0.0, p));
                let d2 = random_disk(&mut rng, p);
                replay_proof_chain(ctx, spec, &ks, &c, &d2, cfg.tolerance, p)
            }
        }
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Location of a sample in the sweep: `c` from grid point `i`, `d₂` from
/// grid point `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub quantity: &'static str,
    pub point: GridPoint,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationSummary {
    pub family: String,
    pub parameters: String,
    pub kappa: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub points: usize,
    pub max_ratio_a2: f64,
    pub worst_a2: Option<GridPoint>,
    pub max_ratio_a3: f64,
    pub worst_a3: Option<GridPoint>,
    pub max_ratio_fekete: f64,
    pub worst_fekete: Option<GridPoint>,
    pub max_ratio: f64,
    /// `|a₂|` ratio at `c = (2, 2, 2)`, `d₂ = 2`.
    pub corner_ratio_a2: f64,
    pub violation_count: usize,
    /// The first violations in grid order.
    pub violations: Vec<Violation>,
    pub pass: bool,
}

const MAX_LISTED_VIOLATIONS: usize = 32;

/// Per-row maxima of squared ratios.
#[derive(Default)]
struct RowStats {
    a2: (f64, usize),
    a3: (f64, usize),
    fekete: (f64, usize, usize),
    violations: Vec<Violation>,
    violation_count: usize,
}

/// Sweeps the Carathéodory grid for one class: for each pair `(i, j)`, `c`
/// is grid point `i`, `d₁ = −c₁`, and `d₂` is the `c₂` of grid point `j`.
/// Ratios compare `|a₂|`, `|a₃|` and `|a₃ − μa₂²|` with their bounds.
pub fn domination_sweep(ctx: &KappaContext, spec: &ClassSpec, cfg: &SweepConfig) -> Result<DominationSummary> {
    cfg.validate()?;
    let p = cfg.precision_bits;
    let report = bounds::theorem_bounds(ctx, spec)?;
    let mut summary = DominationSummary {
        family: spec.family.name().into(),
        parameters: spec.describe(),
        kappa: ctx.kappa().to_string(),
        valid: report.valid,
        diagnostic: None,
        points: 0,
        max_ratio_a2: 0.0,
        worst_a2: None,
        max_ratio_a3: 0.0,
        worst_a3: None,
        max_ratio_fekete: 0.0,
        worst_fekete: None,
        max_ratio: 0.0,
        corner_ratio_a2: 0.0,
        violation_count: 0,
        violations: Vec::new(),
        pass: true,
    };
    if !report.valid {
        summary.diagnostic = Some("bounds are outside their valid domain; sweep skipped".into());
        return Ok(summary);
    }
    let grid = caratheodory_grid(cfg.caratheodory_grid, p);
    summary.points = grid.len() * grid.len();
    let el = elimination::<QuadNumber>(spec, &ctx.scalars())?;
    let lift = |q: &QuadNumber| MpComplex::from_quad(q, p);
    let (k_added, k_sub, k_a2sq) = (lift(&el.k_added), lift(&el.k_sub), lift(&el.k_a2sq));
    let inv_sq = |b: &QuadNumber| {
        let m = b.to_mp(p);
        Mp::ONE.with_precision(p).value() / (m.clone() * m)
    };
    let a2_inv = inv_sq(report.a2_bound_sq.as_ref().expect("valid report"));
    let a3_inv = inv_sq(report.a3_bound.as_ref().expect("valid report"));
    let mus = cfg.mu_grid()?;
    let fekete_rows = mus
        .iter()
        .map(|mu| {
            let f = bounds::fekete(&report, mu)?;
            Ok((k_a2sq.clone() - MpComplex::from_rational(mu, p), inv_sq(&f.value)))
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = (1.0 + cfg.tolerance) * (1.0 + cfg.tolerance);

    let rows: Vec<usize> = (0..grid.len()).collect();
    let stats = map_ordered(cfg.execution, &rows, |&i| {
        let mut s = RowStats::default();
        let c2 = &grid[i].c2;
        let note = |s: &mut RowStats, quantity: &'static str, j: usize, mu: Option<usize>, r2: f64| {
            if r2 > limit {
                s.violation_count += 1;
                if s.violations.len() < MAX_LISTED_VIOLATIONS {
                    s.violations.push(Violation {
                        quantity,
                        point: GridPoint { i, j, mu: mu.map(|m| mus[m].to_string()) },
                        ratio: r2.sqrt(),
                    });
                }
            }
        };
        for (j, d) in grid.iter().enumerate() {
            let a2sq = k_added.clone() * (c2.clone() + d.c2.clone());
            let base = k_sub.clone() * (c2.clone() - d.c2.clone());
            let a3 = base.clone() + k_a2sq.clone() * a2sq.clone();
            // |a₂|⁴ / bound⁴, so one square root gives the squared ratio.
            let r_a2 = mp_to_f64(&(a2sq.norm_sqr() * a2_inv.clone())).sqrt();
            let r_a3 = mp_to_f64(&(a3.norm_sqr() * a3_inv.clone()));
            if r_a2 > s.a2.0 {
                s.a2 = (r_a2, j);
            }
            if r_a3 > s.a3.0 {
                s.a3 = (r_a3, j);
            }
            note(&mut s, "a2", j, None, r_a2);
            note(&mut s, "a3", j, None, r_a3);
            for (m, (coef, inv)) in fekete_rows.iter().enumerate() {
                let v = base.clone() + coef.clone() * a2sq.clone();
                let r = mp_to_f64(&(v.norm_sqr() * inv.clone()));
                if r > s.fekete.0 {
                    s.fekete = (r, j, m);
                }
                note(&mut s, "fekete", j, Some(m), r);
            }
        }
        s
    });

    for (i, s) in stats.into_iter().enumerate() {
        let at = |j: usize, mu: Option<usize>| Some(GridPoint { i, j, mu: mu.map(|m| mus[m].to_string()) });
        if s.a2.0 > summary.max_ratio_a2 {
            summary.max_ratio_a2 = s.a2.0;
            summary.worst_a2 = at(s.a2.1, None);
        }
        if s.a3.0 > summary.max_ratio_a3 {
            summary.max_ratio_a3 = s.a3.0;
            summary.worst_a3 = at(s.a3.1, None);
        }
        if s.fekete.0 > summary.max_ratio_fekete {
            summary.max_ratio_fekete = s.fekete.0;
            summary.worst_fekete = at(s.fekete.1, Some(s.fekete.2));
        }
        summary.violation_count += s.violation_count;
        for v in s.violations {
            if summary.violations.len() < MAX_LISTED_VIOLATIONS {
                summary.violations.push(v);
            }
        }
    }
    summary.max_ratio_a2 = summary.max_ratio_a2.sqrt();
    summary.max_ratio_a3 = summary.max_ratio_a3.sqrt();
    summary.max_ratio_fekete = summary.max_ratio_fekete.sqrt();
    summary.max_ratio = summary.max_ratio_a2.max(summary.max_ratio_a3).max(summary.max_ratio_fekete);

    // Grid point 0 is x = 1 (c = (2, 2, 2)); point m/2 is x = −1 (c₂ = 2).
    let corner = k_added.clone() * (grid[0].c2.clone() + grid[cfg.caratheodory_grid / 2].c2.clone());
    summary.corner_ratio_a2 = mp_to_f64(&(corner.norm_sqr() * a2_inv)).sqrt().sqrt();
    summary.pass = summary.violation_count == 0;
    Ok(summary)
}

/// Domination sweeps over `tuples_per_family` random valid tuples per
/// family, cycling through the configured `κ` values.
pub fn run_domination(cfg: &SweepConfig) -> Result<Vec<DominationSummary>> {
    cfg.validate()?;
    let ctxs: Vec<_> = cfg.kappas()?.into_iter().map(KappaContext::new).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (fi, family) in cfg.family_list()?.into_iter().enumerate() {
        let mut rng = rng_for(cfg.seed, 100 + fi as u64);
        for n in 0..cfg.tuples_per_family {
            let ctx = &ctxs[n % ctxs.len()];
            let spec = random_spec(family, ctx, &mut rng, false)?;
            out.push(domination_sweep(ctx, &spec, cfg)?);
        }
    }
    Ok(out)
}

fn bound_residual(x: &BoundReport, y: &BoundReport) -> f64 {
    if x.valid != y.valid {
        return f64::INFINITY;
    }
    let (Some(fx), Some(fy)) = (&x.fekete, &y.fekete) else {
        return 0.0;
    };
    let pairs = [
        (x.a2_bound_sq.as_ref().unwrap(), y.a2_bound_sq.as_ref().unwrap()),
        (x.a3_bound.as_ref().unwrap(), y.a3_bound.as_ref().unwrap()),
        (&fx.flat, &fy.flat),
        (&fx.slope_unit, &fy.slope_unit),
        (&fx.threshold, &fy.threshold),
    ];
    pairs.iter().map(|(a, b)| a.residual(b)).fold(0.0, f64::max)
}

fn bound_record(id: String, params: String, x: &BoundReport, y: &BoundReport) -> VerificationRecord {
    let residual = bound_residual(x, y);
    let show = |r: &BoundReport| r.a2_bound_sq.as_ref().map_or("invalid".to_string(), ToString::to_string);
    VerificationRecord {
        check_id: id,
        parameters: params,
        mode: Mode::Exact,
        computed_lhs: show(x),
        computed_rhs: show(y),
        residual,
        pass: residual == 0.0,
    }
}

/// The nine identities between theorem families and named subclasses at one
/// point, as `(id, general, special)`.
pub fn specialization_pairs(
    ctx: &KappaContext,
    gamma: &Rational,
    lambda: &Rational,
    alpha: &Rational,
) -> Result<Vec<(&'static str, BoundReport, BoundReport)>> {
    let one = Rational::ONE;
    let zero = Rational::ZERO;
    let two = Rational::from(2);
    Ok(vec![
        (
            "W(alpha=1+2lambda)=FSL",
            bounds::bounds_w(ctx, gamma, lambda, &(&one + &two * lambda))?,
            bounds::cor_fsl(ctx, gamma, lambda)?,
        ),
        ("W(lambda=0)=BSL", bounds::bounds_w(ctx, gamma, &zero, alpha)?, bounds::cor_bsl(ctx, gamma, alpha)?),
        ("W(lambda=0,alpha=1)=HSL", bounds::bounds_w(ctx, gamma, &zero, &one)?, bounds::cor_hsl(ctx, gamma)?),
        ("R(lambda=0)=SLg", bounds::bounds_r(ctx, gamma, &zero)?, bounds::cor_slgamma(ctx, gamma)?),
        ("R(lambda=1)=HSL", bounds::bounds_r(ctx, gamma, &one)?, bounds::cor_hsl(ctx, gamma)?),
        ("B(lambda=1)=SL", bounds::bounds_b(ctx, &one)?, bounds::cor_sl(ctx)?),
        ("P(lambda=0)=SL", bounds::bounds_p(ctx, &zero)?, bounds::cor_sl(ctx)?),
        ("P(lambda=1)=KSL", bounds::bounds_p(ctx, &one)?, bounds::cor_ksl(ctx)?),
        ("SLg(gamma=1)=SL", bounds::cor_slgamma(ctx, &one)?, bounds::cor_sl(ctx)?),
    ])
}

fn random_bound_params(rng: &mut ChaCha8Rng) -> BoundParams {
    BoundParams {
        gamma: ratio(rng.gen_range(1..=8), rng.gen_range(1..=4)),
        lambda: ratio(rng.gen_range(0..=12), 4),
        alpha: ratio(rng.gen_range(0..=12), 4),
    }
}

/// Random parameters valid for `family` (with `B` and `P` ranges respected)
/// whose bounds are valid at `ctx`.
fn random_valid_bound(family: BoundFamily, ctx: &KappaContext, rng: &mut ChaCha8Rng) -> Result<(BoundParams, BoundReport)> {
    for _ in 0..10_000 {
        let mut p = random_bound_params(rng);
        match family {
            BoundFamily::B => p.lambda = Rational::ONE + p.lambda,
            BoundFamily::P => p.lambda = ratio(rng.gen_range(0..=8), 8),
            _ => {}
        }
        let r = bounds::evaluate(family, ctx, &p)?;
        if r.valid {
            return Ok((p, r));
        }
    }
    usage(format!("no valid {family} parameters found at kappa = {}", ctx.kappa()))
}

/// Identity pairs for random tuples at every `κ`, then for every bound
/// family: `a₃ bound = flat + a₂ bound²`, branch agreement at the threshold
/// (`flat = threshold·slope_unit`), and the flat branch at `μ = 1`.
pub fn specialization_suite(cfg: &SweepConfig) -> Result<Vec<VerificationRecord>> {
    cfg.validate()?;
    let ctxs: Vec<_> = cfg.kappas()?.into_iter().map(KappaContext::new).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut rng = rng_for(cfg.seed, 200);
    for ctx in &ctxs {
        for _ in 0..cfg.specialization_tuples {
            let p = random_bound_params(&mut rng);
            let params = format!("kappa={} gamma={} lambda={} alpha={}", ctx.kappa(), p.gamma, p.lambda, p.alpha);
            for (id, x, y) in specialization_pairs(ctx, &p.gamma, &p.lambda, &p.alpha)? {
                out.push(bound_record(format!("specialization.{id}"), params.clone(), &x, &y));
            }
        }
    }
    for (fi, family) in BoundFamily::ALL.into_iter().enumerate() {
        let mut rng = rng_for(cfg.seed, 300 + fi as u64);
        for n in 0..cfg.structure_tuples {
            let ctx = &ctxs[n % ctxs.len()];
            let (p, r) = random_valid_bound(family, ctx, &mut rng)?;
            let params = format!("kappa={} gamma={} lambda={} alpha={}", ctx.kappa(), p.gamma, p.lambda, p.alpha);
            let fp = r.fekete.as_ref().expect("valid report");
            let sum = fp.flat.clone() + r.a2_bound_sq.clone().expect("valid report");
            out.push(eq_record(format!("a3-structure.{family}"), &params, r.a3_bound.as_ref().unwrap(), &sum, 0.0));
            let meet = &fp.threshold * &fp.slope_unit;
            out.push(eq_record(format!("fekete-continuity.{family}"), &params, &fp.flat, &meet, 0.0));
            let at1 = bounds::fekete(&r, &Rational::ONE)?;
            let flat_ok = at1.branch == Branch::Flat && at1.value == fp.flat;
            out.push(VerificationRecord {
                check_id: format!("fekete-mu1.{family}"),
                parameters: params,
                mode: Mode::Exact,
                computed_lhs: at1.branch.to_string(),
                computed_rhs: Branch::Flat.to_string(),
                residual: if flat_ok { 0.0 } else { 1.0 },
                pass: flat_ok,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingKind {
    Numeric,
    Structural,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub id: String,
    pub summary: String,
    pub kind: FindingKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statement_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_value: Option<f64>,
}

impl Finding {
    fn structural(id: &str, summary: &str) -> Self {
        Self {
            id: id.into(),
            summary: summary.into(),
            kind: FindingKind::Structural,
            reference_point: None,
            statement_value: None,
            derived_value: None,
        }
    }
}

/// Discrepancies between printed statements and what the derivations give,
/// plus secondary notation findings that do not change a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypoReport {
    pub discrepancies: Vec<Finding>,
    pub notes: Vec<Finding>,
    pub displays_checked: usize,
}

/// Reference points: `(κ, γ, λ, α)`.
fn audit_points() -> Vec<(Rational, Rational, Rational, Rational)> {
    vec![
        (Rational::ONE, Rational::ONE, Rational::ONE, Rational::ZERO),
        (Rational::from(2), ratio(1, 4), Rational::ONE, Rational::ZERO),
    ]
}

/// The theorem statements as printed, one quantity at a time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quantity {
    A2Squared,
    A3,
    Flat,
    Slope,
    ThresholdFlatSide,
    ThresholdSlopeSide,
}

impl Quantity {
    const ALL: [Quantity; 6] = [
        Quantity::A2Squared,
        Quantity::A3,
        Quantity::Flat,
        Quantity::Slope,
        Quantity::ThresholdFlatSide,
        Quantity::ThresholdSlopeSide,
    ];

    fn name(self) -> &'static str {
        match self {
            Quantity::A2Squared => "a2-bound-squared",
            Quantity::A3 => "a3-bound",
            Quantity::Flat => "fekete-flat",
            Quantity::Slope => "fekete-slope",
            Quantity::ThresholdFlatSide => "fekete-threshold-flat-side",
            Quantity::ThresholdSlopeSide => "fekete-threshold-slope-side",
        }
    }

    fn is_threshold(self) -> bool {
        matches!(self, Quantity::ThresholdFlatSide | Quantity::ThresholdSlopeSide)
    }
}

fn statement_value(family: Family, q: Quantity, ctx: &KappaContext, g: &Rational, l: &Rational, a: &Rational) -> QuadNumber {
    let r = ctx.radicand();
    let c = |v: Rational| QuadNumber::rational(v, r);
    let n = |v: i64| c(Rational::from(v));
    let k = ctx.kappa_q();
    let t = ctx.tau().clone();
    let kt = &k * &t;
    let abs_kt = kt.abs();
    let k2t = &k * &kt;
    let k3t2 = &k2t * &kt;
    let x = &k - &(&(&k * &k) + &n(2)) * &t;
    let (gq, lq, aq) = (c(g.clone()), c(l.clone()), c(a.clone()));
    let abs_g = gq.abs();
    let g2 = &gq * &gq;
    match family {
        Family::W => {
            let big_a = &(&n(1) + &(&n(2) * &aq)) + &(&n(2) * &lq);
            let oa = &n(1) + &aq;
            let den = &(&(&gq * &k2t) * &big_a) + &(&(&x * &oa) * &oa);
            match q {
                Quantity::A2Squared => &(&(&g2 * &abs_kt) * &(&abs_kt * &k)) / &den,
                Quantity::A3 => &(&(&(&abs_g * &abs_kt) * &x) * &(&oa * &oa)) / &(&big_a * &den),
                Quantity::Flat => &(&gq * &abs_kt) / &big_a,
                Quantity::Slope => &(&g2 * &k3t2) / &den,
                Quantity::ThresholdFlatSide | Quantity::ThresholdSlopeSide => &den / &(&(&gq * &k2t) * &big_a),
            }
        }
        Family::R => {
            let tl = &n(2) + &lq;
            let ol = &n(1) + &lq;
            let m = &(&(&(&gq * &k2t) * &tl) * &ol) + &(&(&n(2) * &(&ol * &ol)) * &x);
            match q {
                Quantity::A2Squared => &(&(&n(2) * &g2) * &(&(&abs_kt * &abs_kt) * &k)) / &m,
                Quantity::A3 => {
                    let brace = &m - &(&(&n(2) * &tl) * &(&gq * &k2t));
                    &(&(&abs_g * &abs_kt) * &brace) / &(&tl * &m)
                }
                Quantity::Flat => &(&abs_g * &abs_kt) / &tl,
                Quantity::Slope => &(&(&n(2) * &g2) * &k3t2) / &m,
                Quantity::ThresholdFlatSide | Quantity::ThresholdSlopeSide => {
                    &m / &(&(&(&n(2) * &abs_g) * &k2t.abs()) * &tl)
                }
            }
        }
        Family::B => {
            let tl = &(&n(2) * &lq) - &n(1);
            let three = &(&n(3) * &lq) - &n(1);
            let den = &(&(&lq * &tl) * &k2t) + &(&(&x * &tl) * &tl);
            match q {
                Quantity::A2Squared => &(&abs_kt * &abs_kt) / &den,
                Quantity::A3 => {
                    let quad = &(&(&(&n(2) * &lq) * &lq) - &(&n(4) * &lq)) + &n(1);
                    let bracket = &(&(&x * &tl) * &tl) + &(&quad * &k2t);
                    &(&abs_kt * &bracket) / &(&three * &den)
                }
                Quantity::Flat => &abs_kt / &three,
                Quantity::Slope => &k3t2 / &den,
                Quantity::ThresholdFlatSide => &den / &(&k2t * &three),
                Quantity::ThresholdSlopeSide => &den / &(&(&k * &k2t).abs() * &three),
            }
        }
        Family::P => {
            let ol = &n(1) + &lq;
            let o2l = &n(1) + &(&n(2) * &lq);
            let quad = &(&n(1) + &(&n(2) * &lq)) - &(&lq * &lq);
            let den = &(&k2t * &quad) + &(&(&x * &ol) * &ol);
            let y = &k - &(&(&n(2) * &(&(&k * &k) + &n(1))) * &t);
            match q {
                Quantity::A2Squared => &(&(&abs_kt * &abs_kt) * &k) / &den,
                Quantity::A3 => &(&(&(&abs_kt * &y) * &ol) * &ol) / &(&(&n(2) * &o2l) * &den),
                Quantity::Flat => &abs_kt / &(&n(2) + &(&n(4) * &lq)),
                Quantity::Slope => &k3t2 / &den,
                Quantity::ThresholdFlatSide | Quantity::ThresholdSlopeSide => {
                    &den / &(&(&n(2) * &k2t.abs()) * &o2l)
                }
            }
        }
    }
}

fn derived_value(report: &BoundReport, q: Quantity) -> QuadNumber {
    let fp = report.fekete.as_ref().expect("audit points are valid");
    match q {
        Quantity::A2Squared => report.a2_bound_sq.clone().unwrap(),
        Quantity::A3 => report.a3_bound.clone().unwrap(),
        Quantity::Flat => fp.flat.clone(),
        Quantity::Slope => fp.slope_unit.clone(),
        Quantity::ThresholdFlatSide | Quantity::ThresholdSlopeSide => fp.threshold.clone(),
    }
}

/// `z` coefficient of the inverse-function operator of the `P` family when its
/// numerator differentiates `f` rather than `g = f⁻¹`, against the printed
/// coefficient identity.
fn p_inverse_operator_check(ctx: &KappaContext, lambda: &Rational) -> Result<(QuadNumber, QuadNumber, QuadNumber)> {
    let r = ctx.radicand();
    let c = |v: Rational| QuadNumber::rational(v, r);
    let pair = CoefficientPair::new(c(ratio(1, 2)), c(ratio(1, 3)));
    let f = pair.series(4);
    let g = f.revert()?;
    let l = c(lambda.clone());
    let one = c(Rational::ONE);
    let mixed_num = &f.derivative().mul_z() + &g.derivative().derivative().mul_z().mul_z().scale(&l);
    let den = &g.scale(&(one.clone() - l.clone())) + &g.derivative().mul_z().scale(&l);
    let misprinted = mixed_num.div_z()?.checked_div(&den.div_z()?)?;
    let spec = ClassSpec::p(lambda.clone())?;
    let corrected = apply_functional(&spec, &g)?;
    let printed = printed_forms(&spec, &one)?.g_side(&pair).0;
    Ok((misprinted.coeff(1), corrected.coeff(1), printed))
}

fn point_label(k: &Rational, g: &Rational, l: &Rational, a: &Rational, family: Family) -> String {
    match family {
        Family::W => format!("kappa={k} gamma={g} lambda={l} alpha={a}"),
        Family::R => format!("kappa={k} gamma={g} lambda={l}"),
        Family::B | Family::P => format!("kappa={k} lambda={l}"),
    }
}

/// Compares every theorem-statement display with the derived bounds at the
/// reference points, checks the subclass identities there, and evaluates the
/// inverse-function operator of the `P` family as printed.
///
/// A statement value that differs from the derived one is a discrepancy when
/// it is one of the bounds themselves. Threshold displays that differ only in
/// sign, or in their own notation between the two branches, are notes.
pub fn typo_audit() -> Result<TypoReport> {
    let mut discrepancies = Vec::new();
    let mut notes = Vec::new();
    let mut checked = 0;
    for family in Family::ALL {
        for q in Quantity::ALL {
            let mut finding: Option<Finding> = None;
            let mut sign_only = None;
            for (k, g, l, a) in audit_points() {
                let ctx = KappaContext::new(k.clone())?;
                let spec = match family {
                    Family::W => ClassSpec::w(g.clone(), l.clone(), a.clone())?,
                    Family::R => ClassSpec::r(g.clone(), l.clone())?,
                    Family::B => ClassSpec::b(l.clone())?,
                    Family::P => ClassSpec::p(l.clone())?,
                };
                let report = bounds::theorem_bounds(&ctx, &spec)?;
                let s = statement_value(family, q, &ctx, &g, &l, &a);
                let d = derived_value(&report, q);
                checked += 1;
                if s == d {
                    continue;
                }
                let label = point_label(&k, &g, &l, &a, family);
                if s.abs() == d {
                    sign_only.get_or_insert(label);
                    continue;
                }
                let (sv, dv) = if q == Quantity::A2Squared {
                    (s.to_f64().sqrt(), d.to_f64().sqrt())
                } else {
                    (s.to_f64(), d.to_f64())
                };
                finding.get_or_insert(Finding {
                    id: format!("{}.{}", family.name(), q.name()),
                    summary: if q == Quantity::A2Squared {
                        format!(
                            "{} family statement: the |a2| bound differs from the derivation by a factor {:.17}",
                            family.name(),
                            dv / sv
                        )
                    } else {
                        format!("{} family statement: {} differs from the derivation", family.name(), q.name())
                    },
                    kind: FindingKind::Numeric,
                    reference_point: Some(label),
                    statement_value: Some(sv),
                    derived_value: Some(dv),
                });
            }
            if let Some(f) = finding {
                if q.is_threshold() {
                    notes.push(f);
                } else {
                    discrepancies.push(f);
                }
            } else if let Some(label) = sign_only {
                notes.push(Finding {
                    id: format!("{}.{}.sign", family.name(), q.name()),
                    summary: format!(
                        "{} family statement: {} is printed with a negative denominator; it agrees with the derivation in modulus",
                        family.name(),
                        q.name()
                    ),
                    kind: FindingKind::Numeric,
                    reference_point: Some(label),
                    statement_value: None,
                    derived_value: None,
                });
            }
        }
    }

    for (k, g, l, a) in audit_points() {
        let ctx = KappaContext::new(k.clone())?;
        for (id, x, y) in specialization_pairs(&ctx, &g, &l, &a)? {
            checked += 1;
            if bound_residual(&x, &y) != 0.0 {
                discrepancies.push(Finding {
                    id: format!("specialization.{id}"),
                    summary: format!("subclass display disagrees with the theorem it specializes: {id}"),
                    kind: FindingKind::Numeric,
                    reference_point: Some(format!("kappa={k} gamma={g} lambda={l} alpha={a}")),
                    statement_value: y.a2_bound_sq.as_ref().map(QuadNumber::to_f64),
                    derived_value: x.a2_bound_sq.as_ref().map(QuadNumber::to_f64),
                });
            }
        }
    }

    discrepancies.push(Finding::structural(
        "W.definition.subordination",
        "W class definition: the condition on the inverse function is missing the subordination symbol that the condition on f carries",
    ));

    let (k, _, l, _) = audit_points().swap_remove(0);
    let ctx = KappaContext::new(k.clone())?;
    let (misprinted, corrected, printed) = p_inverse_operator_check(&ctx, &l)?;
    checked += 1;
    if misprinted != printed && corrected == printed {
        discrepancies.push(Finding {
            id: "P.inverse-operator.derivative".into(),
            summary: "P family: the inverse-function operator differentiates f where g is required; with g its expansion matches the printed coefficient identity"
                .into(),
            kind: FindingKind::Numeric,
            reference_point: Some(format!("kappa={k} lambda={l} a2=1/2 a3=1/3")),
            statement_value: Some(misprinted.to_f64()),
            derived_value: Some(printed.to_f64()),
        });
    }

    notes.push(Finding::structural(
        "W.fekete-flat.modulus",
        "W family statement: the flat Fekete-Szego value prints gamma where |gamma| is derived; equal for gamma > 0",
    ));
    notes.push(Finding::structural(
        "SLg.a3-bound.modulus",
        "SL(gamma) subclass: the a3 numerator carries an absolute value that is redundant for gamma > 0",
    ));
    notes.push(Finding::structural(
        "fekete.h-mu.sign",
        "Fekete-Szego derivations: the sign of the gamma*kappa*|tau| term in the h(mu) decomposition is inconsistent; taking moduli removes it",
    ));
    Ok(TypoReport {
        discrepancies,
        notes,
        displays_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn small_cfg() -> SweepConfig {
        SweepConfig {
            kappa_list: vec!["1".into(), "1/2".into()],
            tuples_per_family: 1,
            replay_tuples: 4,
            specialization_tuples: 2,
            structure_tuples: 3,
            caratheodory_grid: 4,
            mu_steps: 4,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = SweepConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.mu_grid().unwrap().len(), 17);
        assert_eq!(cfg.mu_grid().unwrap()[8], int(1));
        let bad = SweepConfig { tolerance: 0.0, ..SweepConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { kappa_list: vec![], ..SweepConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { families: vec!["Q".into()], ..SweepConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn corner_replay_attains_the_a2_bound() {
        let ctx = KappaContext::new(int(1)).unwrap();
        for family in Family::ALL {
            let spec = match family {
                Family::W => ClassSpec::w(int(1), int(0), int(0)).unwrap(),
                Family::R => ClassSpec::r(int(1), int(1)).unwrap(),
                Family::B => ClassSpec::b(int(2)).unwrap(),
                Family::P => ClassSpec::p(int(1)).unwrap(),
            };
            let c = exact_prefix(&ctx, int(2), int(2));
            let d2 = QuadNumber::rational(int(2), ctx.radicand());
            let recs = replay_proof_chain(&ctx, &spec, &ctx.scalars(), &c, &d2, 1e-10, 128).unwrap();
            assert!(recs.iter().all(|r| r.pass), "{recs:#?}");
            let el = elimination::<QuadNumber>(&spec, &ctx.scalars()).unwrap();
            let a2sq = el.k_added.scale(&int(4));
            assert_eq!(Some(a2sq), bounds::theorem_bounds(&ctx, &spec).unwrap().a2_bound_sq);
        }
    }

    #[test]
    fn zero_data_gives_zero_coefficients() {
        let ctx = KappaContext::new(int(2)).unwrap();
        let spec = ClassSpec::w(int(1), int(1), int(1)).unwrap();
        let c = exact_prefix(&ctx, int(0), int(0));
        let zero = QuadNumber::zero(ctx.radicand());
        let recs = replay_proof_chain(&ctx, &spec, &ctx.scalars(), &c, &zero, 1e-10, 128).unwrap();
        assert!(recs.iter().all(|r| r.pass));
        assert!(recs.iter().filter(|r| r.check_id.ends_with("added")).all(|r| r.computed_rhs == "0"));
    }

    #[test]
    fn replay_small_config_passes() {
        let recs = run_proof_chain(&small_cfg()).unwrap();
        assert_eq!(recs.len(), 4 * 2 * 4 * 10);
        let bad: Vec<_> = recs.iter().filter(|r| !r.pass).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn replay_detects_a_wrong_prefix() {
        // Breaking d1 = -c1 is rejected before any record is produced.
        let ctx = KappaContext::new(int(1)).unwrap();
        let spec = ClassSpec::p(int(0)).unwrap();
        let c = exact_prefix(&ctx, int(1), int(1));
        let d = exact_prefix(&ctx, int(1), int(1));
        assert!(coefficient_equations(&spec, &ctx.scalars(), &c, &d, 1e-10).is_err());
    }

    #[test]
    fn sweep_is_partition_independent() {
        let ctx = KappaContext::new(int(1)).unwrap();
        let spec = ClassSpec::w(int(1), int(0), int(0)).unwrap();
        let par = domination_sweep(&ctx, &spec, &small_cfg()).unwrap();
        let seq = domination_sweep(&ctx, &spec, &SweepConfig { execution: Execution::Sequential, ..small_cfg() }).unwrap();
        assert_eq!(par, seq);
        assert!(par.pass && par.violation_count == 0);
        assert!(par.corner_ratio_a2 > 1.0 - 1e-9 && par.corner_ratio_a2 <= 1.0 + 1e-10);
        assert_eq!(par.points, 16 * 16);
    }

    #[test]
    fn sweep_skips_invalid_domain() {
        let ctx = KappaContext::new(int(1)).unwrap();
        let spec = ClassSpec::w(int(1), int(5), int(0)).unwrap();
        let s = domination_sweep(&ctx, &spec, &small_cfg()).unwrap();
        assert!(!s.valid && s.diagnostic.is_some() && s.points == 0);
    }

    #[test]
    fn specialization_suite_small() {
        let recs = specialization_suite(&small_cfg()).unwrap();
        assert_eq!(recs.len(), 2 * 2 * 9 + 10 * 3 * 3);
        assert!(recs.iter().all(|r| r.pass));
    }

    #[test]
    fn audit_finds_the_catalogued_discrepancies() {
        let r = typo_audit().unwrap();
        let ids: Vec<_> = r.discrepancies.iter().map(|f| f.id.as_str()).collect();
        assert_eq!(ids, ["B.a2-bound-squared", "W.definition.subordination", "P.inverse-operator.derivative"]);
        let b = &r.discrepancies[0];
        let ratio = b.derived_value.unwrap() / b.statement_value.unwrap();
        assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
        assert!(b.reference_point.as_deref().unwrap().starts_with("kappa=2"));
    }
}
