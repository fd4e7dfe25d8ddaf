//! κ-Fibonacci numbers `F_{κ,n+1} = κF_{κ,n} + F_{κ,n−1}`, `F_{κ,0} = 0`,
//! `F_{κ,1} = 1`, by recurrence and by the Binet form in ℚ(√(κ²+4)).

use std::sync::Arc;

use crate::error::{usage, Result};
use crate::quadfield::{QuadNumber, Radicand};
use crate::rational::Rational;
use crate::scalar::{MpComplex, Scalar};

/// Default number of cached κ-Fibonacci terms.
const DEFAULT_CACHE: usize = 64;

/// A fixed κ together with `D = κ² + 4`, `τ_κ = (κ − √D)/2` and a prefix of
/// the κ-Fibonacci sequence.
#[derive(Clone, Debug)]
pub struct KappaContext {
    kappa: Rational,
    radicand: Arc<Radicand>,
    tau: QuadNumber,
    fib_cache: Vec<QuadNumber>,
}

impl KappaContext {
    pub fn new(kappa: Rational) -> Result<Self> {
        Self::with_cache(kappa, DEFAULT_CACHE)
    }

    /// Builds the context and caches `F_{κ,0..=len}`.
    pub fn with_cache(kappa: Rational, len: usize) -> Result<Self> {
        if kappa.is_zero() {
            return usage("kappa must be nonzero");
        }
        let d = &kappa * &kappa + Rational::from(4);
        let radicand = Radicand::new(d)?;
        let half = Rational::from_parts_signed(1.into(), 2.into());
        let tau = QuadNumber::new(&kappa * &half, -half, &radicand);
        let k = QuadNumber::rational(kappa.clone(), &radicand);
        let mut fib = Vec::with_capacity(len + 1);
        fib.push(QuadNumber::zero(&radicand));
        fib.push(QuadNumber::one(&radicand));
        while fib.len() <= len {
            let n = fib.len();
            let next = &k * &fib[n - 1] + &fib[n - 2];
            fib.push(next);
        }
        fib.truncate(len.max(1) + 1);
        Ok(Self {
            kappa,
            radicand,
            tau,
            fib_cache: fib,
        })
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    /// `D = κ² + 4`.
    pub fn radicand(&self) -> &Arc<Radicand> {
        &self.radicand
    }

    pub fn tau(&self) -> &QuadNumber {
        &self.tau
    }

    /// κ as an element of ℚ(√D).
    pub fn kappa_q(&self) -> QuadNumber {
        QuadNumber::rational(self.kappa.clone(), &self.radicand)
    }

    /// `F_{κ,n}` by iterating the recurrence (served from the cache when possible).
    pub fn kfib_rec(&self, n: usize) -> QuadNumber {
        if let Some(v) = self.fib_cache.get(n) {
            return v.clone();
        }
        let k = self.kappa_q();
        let mut prev = self.fib_cache[self.fib_cache.len() - 2].clone();
        let mut cur = self.fib_cache[self.fib_cache.len() - 1].clone();
        for _ in self.fib_cache.len() - 1..n {
            let next = &k * &cur + &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `F_{κ,n} = ((κ − τ)ⁿ − τⁿ) / √D`, evaluated exactly.
    pub fn kfib_binet(&self, n: usize) -> QuadNumber {
        let n = u32::try_from(n).expect("index fits in u32");
        let other_root = self.kappa_q() - &self.tau;
        let num = other_root.pow(n) - self.tau.pow(n);
        num / QuadNumber::sqrt_d(&self.radicand)
    }

    /// `F_{κ,n−1} + F_{κ,n+1}` for `n ≥ 1`.
    pub fn lucas_like(&self, n: usize) -> Result<QuadNumber> {
        if n == 0 {
            return usage("lucas_like is defined for n >= 1");
        }
        Ok(self.kfib_rec(n - 1) + self.kfib_rec(n + 1))
    }

    pub fn scalars(&self) -> KappaScalars<QuadNumber> {
        KappaScalars {
            kappa: self.kappa_q(),
            tau: self.tau.clone(),
        }
    }

    /// κ and τ rounded to `precision` bits for float mode.
    pub fn float_scalars(&self, precision: usize) -> KappaScalars<MpComplex> {
        KappaScalars {
            kappa: MpComplex::from_rational(&self.kappa, precision),
            tau: MpComplex::from_quad(&self.tau, precision),
        }
    }
}

/// κ and τ_κ in a chosen coefficient field, with the derived quantities the
/// bound formulas share.
#[derive(Clone, Debug)]
pub struct KappaScalars<S> {
    pub kappa: S,
    pub tau: S,
}

impl<S: Scalar> KappaScalars<S> {
    /// `p̃_{κ,1} = κτ`.
    pub fn p1(&self) -> S {
        self.kappa.clone() * self.tau.clone()
    }

    /// `p̃_{κ,2} = (κ² + 2)τ²`.
    pub fn p2(&self) -> S {
        let k = &self.kappa;
        (k.clone() * k.clone() + k.from_i64_like(2)) * self.tau.clone() * self.tau.clone()
    }

    /// `p̃_{κ,3} = (κ³ + 3κ)τ³`.
    pub fn p3(&self) -> S {
        let k = &self.kappa;
        (k.powi(3) + k.from_i64_like(3) * k.clone()) * self.tau.powi(3)
    }

    /// `κ − (κ² + 2)τ`, the term shared by every radicand.
    pub fn shell_term(&self) -> S {
        let k = &self.kappa;
        k.clone() - (k.clone() * k.clone() + k.from_i64_like(2)) * self.tau.clone()
    }
}
