//! Arbitrary-precision rationals and the multi-precision binary float used by
//! float mode.

use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::{Context, FBig};
use dashu_int::IBig;

use crate::error::{Error, Result};

pub use dashu_ratio::RBig as Rational;

/// Binary multi-precision float, round-half-to-even.
pub type Mp = FBig<HalfEven, 2>;

/// Working precision (bits) for float mode when nothing else is configured.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Environment variable that overrides the float-mode working precision.
pub const PRECISION_ENV: &str = "KFIB_PRECISION_BITS";

/// Reads the working precision from `KFIB_PRECISION_BITS`, defaulting to 128.
pub fn precision_from_env() -> Result<usize> {
    match std::env::var(PRECISION_ENV) {
        Ok(s) => {
            let bits: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{PRECISION_ENV}={s} is not an integer")))?;
            if bits < 53 {
                return Err(Error::Usage(format!("{PRECISION_ENV} must be at least 53, got {bits}")));
            }
            Ok(bits)
        }
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from_parts_signed(IBig::from(n), IBig::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

/// Parses `"p/q"`, integers, and decimal strings (`"-0.125"`, `"2.5e-1"`) as exact rationals.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let s = src.trim();
    let err = || Error::Parse(format!("not a rational number: {src:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if s.contains('/') {
        let (n, d) = s.split_once('/').ok_or_else(err)?;
        let n = IBig::from_str(n.trim()).map_err(|_| err())?;
        let d = IBig::from_str(d.trim()).map_err(|_| err())?;
        if d == IBig::ZERO {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::from_parts_signed(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let mut num = IBig::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = IBig::from(10u8);
    Ok(if scale >= 0 {
        Rational::from(num * ten.pow(scale as usize))
    } else {
        Rational::from_parts_signed(num, ten.pow((-scale) as usize))
    })
}

/// Rounds a rational to the nearest `Mp` at `precision` bits.
pub fn rational_to_mp(r: &Rational, precision: usize) -> Mp {
    let ctx = Context::<HalfEven>::new(precision);
    let num = Mp::from(r.numerator().clone());
    let den = Mp::from(IBig::from(r.denominator().clone()));
    ctx.div(num.repr(), den.repr()).value()
}

pub fn mp_from_f64(x: f64, precision: usize) -> Mp {
    Mp::try_from(x)
        .expect("finite float")
        .with_precision(precision)
        .value()
}

pub fn mp_to_f64(x: &Mp) -> f64 {
    x.to_f64().value()
}
