//! `kfib`: κ-Fibonacci numbers, shell-like coefficients, coefficient bounds,
//! Fekete–Szegő tables and the verification suites.
//!
//! Exit codes: 0 success (including bound reports with `valid = false`),
//! 1 verification failure, 2 usage error.

mod table;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kfib_core::bounds::{self, BoundFamily, BoundParams, BoundReport};
use kfib_core::rational::{mp_to_f64, precision_from_env, rational_to_mp};
use kfib_core::shelllike::ptilde_series;
use kfib_core::verify::{self, SweepConfig};
use kfib_core::{parse_rational, KappaContext, QuadNumber, Rational};

use table::{Cell, Format, OutputTable};

#[derive(Parser, Debug)]
#[command(name = "kfib", version, about = "κ-Fibonacci shell-like coefficient bounds and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// κ-Fibonacci numbers F_0 ..= F_n.
    Fib {
        #[arg(long, default_value = "1", value_parser = rational_arg)]
        kappa: Rational,
        #[arg(long)]
        n: usize,
        /// Cross-check every term against the closed form.
        #[arg(long)]
        binet: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Taylor coefficients of the shell-like generating function.
    Ptilde {
        #[arg(long, default_value = "1", value_parser = rational_arg)]
        kappa: Rational,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Coefficient bounds for a class, as JSON.
    Bound {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Fekete–Szegő bound over a grid of μ.
    Fekete {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value = "-3", value_parser = rational_arg, allow_hyphen_values = true)]
        mu_from: Rational,
        #[arg(long, default_value = "5", value_parser = rational_arg, allow_hyphen_values = true)]
        mu_to: Rational,
        #[arg(long, default_value_t = 16)]
        mu_steps: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Runs verification suites and streams JSON lines.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// TOML file with sweep settings; missing keys take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct ClassArgs {
    #[arg(long, value_parser = parse_family)]
    family: BoundFamily,
    #[arg(long, default_value = "1", value_parser = rational_arg)]
    kappa: Rational,
    #[arg(long, default_value = "1", value_parser = rational_arg, allow_hyphen_values = true)]
    gamma: Rational,
    /// Defaults to 1 for `B` and 0 otherwise.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    lambda: Option<Rational>,
    #[arg(long, default_value = "0", value_parser = rational_arg, allow_hyphen_values = true)]
    alpha: Rational,
}

fn parse_family(s: &str) -> Result<BoundFamily, String> {
    BoundFamily::parse(s).map_err(|e| e.to_string())
}

impl ClassArgs {
    fn params(&self) -> BoundParams {
        let default_lambda = if self.family == BoundFamily::B { Rational::ONE } else { Rational::ZERO };
        BoundParams {
            gamma: self.gamma.clone(),
            lambda: self.lambda.clone().unwrap_or(default_lambda),
            alpha: self.alpha.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    ProofChain,
    Domination,
    Specialization,
    Typos,
    All,
}

enum Failure {
    Usage(String),
    Verification(String),
    /// The reader went away (e.g. `| head`); not an error.
    Closed,
}

impl From<kfib_core::Error> for Failure {
    fn from(e: kfib_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // csv wraps the underlying error, so look through one layer.
        let inner_kind = e
            .get_ref()
            .and_then(|s| s.downcast_ref::<csv::Error>())
            .and_then(|c| match c.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            });
        if e.kind() == io::ErrorKind::BrokenPipe || inner_kind == Some(io::ErrorKind::BrokenPipe) {
            Failure::Closed
        } else {
            Failure::Usage(format!("i/o error: {e}"))
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Fib { kappa, n, binet, format } => cmd_fib(&kappa, n, binet, format, &mut out),
        Command::Ptilde { kappa, order, format } => cmd_ptilde(&kappa, order, format, &mut out),
        Command::Bound { class } => cmd_bound(&class, &mut out),
        Command::Fekete { class, mu_from, mu_to, mu_steps, format } => {
            cmd_fekete(&class, &mu_from, &mu_to, mu_steps, format, &mut out)
        }
        Command::Verify { suite, config } => cmd_verify(suite, config.as_deref(), &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) | Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("kfib: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("kfib: {msg}");
            ExitCode::from(2)
        }
    }
}

fn to_f64(q: &QuadNumber, precision: usize) -> f64 {
    mp_to_f64(&q.to_mp(precision))
}

fn cmd_fib(kappa: &Rational, n: usize, binet: bool, format: Format, out: &mut impl Write) -> CliResult {
    let ctx = KappaContext::with_cache(kappa.clone(), n + 1)?;
    let precision = precision_from_env()?;
    let mut headers = vec!["n", "value", "float"];
    if binet {
        headers.push("binet_agrees");
    }
    let mut t = OutputTable::new(&headers);
    let mut mismatches = 0;
    for k in 0..=n {
        let f = ctx.kfib_rec(k);
        let mut row = vec![Cell::Int(k as i64), Cell::Text(f.to_string()), Cell::Num(to_f64(&f, precision))];
        if binet {
            let agrees = ctx.kfib_binet(k) == f;
            mismatches += usize::from(!agrees);
            row.push(Cell::Bool(agrees));
        }
        t.push(row);
    }
    t.write(format, out)?;
    if mismatches > 0 {
        return Err(Failure::Verification(format!("{mismatches} terms disagree with the closed form")));
    }
    Ok(())
}

fn cmd_ptilde(kappa: &Rational, order: usize, format: Format, out: &mut impl Write) -> CliResult {
    let ctx = KappaContext::new(kappa.clone())?;
    let precision = precision_from_env()?;
    let s = ptilde_series(&ctx.scalars(), order);
    let mut t = OutputTable::new(&["n", "coefficient", "value"]);
    for k in 0..=order {
        let c = s.coeff(k);
        t.push(vec![Cell::Int(k as i64), Cell::Text(c.to_string()), Cell::Num(to_f64(&c, precision))]);
    }
    t.write(format, out)?;
    Ok(())
}

fn exact_json(q: &QuadNumber, precision: usize) -> Value {
    json!({ "exact": q.to_string(), "value": to_f64(q, precision) })
}

/// Parameters each family reads.
fn used_params(family: BoundFamily) -> &'static [&'static str] {
    match family {
        BoundFamily::W => &["gamma", "lambda", "alpha"],
        BoundFamily::R | BoundFamily::Fsl => &["gamma", "lambda"],
        BoundFamily::B | BoundFamily::P => &["lambda"],
        BoundFamily::Bsl => &["gamma", "alpha"],
        BoundFamily::Hsl | BoundFamily::SlGamma => &["gamma"],
        BoundFamily::Sl | BoundFamily::Ksl => &[],
    }
}

fn report_json(family: BoundFamily, kappa: &Rational, p: &BoundParams, r: &BoundReport, precision: usize) -> Value {
    let mut params = serde_json::Map::new();
    for name in used_params(family) {
        let v = match *name {
            "gamma" => &p.gamma,
            "lambda" => &p.lambda,
            _ => &p.alpha,
        };
        params.insert((*name).into(), Value::String(v.to_string()));
    }
    json!({
        "family": family.name(),
        "kappa": kappa.to_string(),
        "parameters": params,
        "valid": r.valid,
        "radicand": exact_json(&r.radicand, precision),
        "a2_bound": r.a2_bound(precision).map(|m| mp_to_f64(&m)),
        "a2_bound_squared": r.a2_bound_sq.as_ref().map(|q| exact_json(q, precision)),
        "a3_bound": r.a3_bound.as_ref().map(|q| exact_json(q, precision)),
        "fekete": r.fekete.as_ref().map(|f| json!({
            "flat": exact_json(&f.flat, precision),
            "slope_unit": exact_json(&f.slope_unit, precision),
            "threshold": exact_json(&f.threshold, precision),
        })),
    })
}

fn cmd_bound(class: &ClassArgs, out: &mut impl Write) -> CliResult {
    let precision = precision_from_env()?;
    let ctx = KappaContext::new(class.kappa.clone())?;
    let p = class.params();
    let r = bounds::evaluate(class.family, &ctx, &p)?;
    let v = report_json(class.family, &class.kappa, &p, &r, precision);
    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("JSON values serialize"))?;
    Ok(())
}

fn cmd_fekete(
    class: &ClassArgs,
    from: &Rational,
    to: &Rational,
    steps: usize,
    format: Format,
    out: &mut impl Write,
) -> CliResult {
    let precision = precision_from_env()?;
    let ctx = KappaContext::new(class.kappa.clone())?;
    let r = bounds::evaluate(class.family, &ctx, &class.params())?;
    let mut t = OutputTable::new(&["mu", "value", "branch", "threshold"]);
    if !r.valid {
        eprintln!("kfib: {} bounds are outside their valid domain at these parameters", class.family);
        t.write(format, out)?;
        return Ok(());
    }
    let mus: Vec<Rational> = if steps == 0 {
        vec![from.clone()]
    } else {
        let step = (to - from) / Rational::from(steps);
        (0..=steps).map(|k| from + &step * Rational::from(k)).collect()
    };
    for mu in &mus {
        let f = bounds::fekete(&r, mu)?;
        t.push(vec![
            Cell::Num(mp_to_f64(&rational_to_mp(mu, precision))),
            Cell::Num(to_f64(&f.value, precision)),
            Cell::Text(f.branch.to_string()),
            Cell::Num(to_f64(&f.threshold, precision)),
        ]);
    }
    t.write(format, out)?;
    Ok(())
}

fn load_config(path: Option<&std::path::Path>) -> Result<SweepConfig, Failure> {
    let mut table = match path {
        None => toml::Table::new(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            text.parse::<toml::Table>().map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
    };
    if !table.contains_key("precision_bits") {
        table.insert("precision_bits".into(), toml::Value::Integer(precision_from_env()? as i64));
    }
    let cfg: SweepConfig = table.try_into().map_err(|e: toml::de::Error| Failure::Usage(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

fn line(out: &mut impl Write, suite: &str, value: impl serde::Serialize) -> io::Result<()> {
    let mut v = serde_json::to_value(value).expect("records serialize");
    if let Value::Object(m) = &mut v {
        m.insert("suite".into(), Value::String(suite.into()));
    }
    writeln!(out, "{}", serde_json::to_string(&v).expect("JSON values serialize"))
}

fn cmd_verify(suite: Suite, config: Option<&std::path::Path>, out: &mut impl Write) -> CliResult {
    let cfg = load_config(config)?;
    let runs = |s: Suite| suite == s || suite == Suite::All;
    let (mut checks, mut failures) = (0usize, 0usize);
    if runs(Suite::ProofChain) {
        for r in verify::run_proof_chain(&cfg)? {
            checks += 1;
            failures += usize::from(!r.pass);
            line(out, "proof-chain", &r)?;
        }
    }
    if runs(Suite::Domination) {
        for s in verify::run_domination(&cfg)? {
            checks += 1;
            failures += usize::from(!s.pass);
            line(out, "domination", &s)?;
        }
    }
    if runs(Suite::Specialization) {
        for r in verify::specialization_suite(&cfg)? {
            checks += 1;
            failures += usize::from(!r.pass);
            line(out, "specialization", &r)?;
        }
    }
    let mut findings = 0;
    if runs(Suite::Typos) {
        let report = verify::typo_audit()?;
        for f in &report.discrepancies {
            findings += 1;
            line(out, "typos", json!({ "category": "discrepancy", "finding": f }))?;
        }
        for f in &report.notes {
            line(out, "typos", json!({ "category": "note", "finding": f }))?;
        }
    }
    line(
        out,
        "summary",
        json!({ "checks": checks, "failures": failures, "discrepancies": findings, "pass": failures == 0 }),
    )?;
    if failures > 0 {
        return Err(Failure::Verification(format!("{failures} of {checks} checks failed")));
    }
    Ok(())
}
