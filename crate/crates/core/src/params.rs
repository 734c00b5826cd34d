//! Instance parameters `(n, m, q)` and the numeric conventions shared by the
//! rest of the crate.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper limit on the bit width `n`.
pub const MAX_N: u32 = 256;

/// Exact rational in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// One instance of the distinguishing problem: an oracle over `n`-bit
/// strings whose replies drop the low `m` bits, queried `q` times.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    n: u32,
    m: u32,
    q: BigUint,
}

impl Params {
    pub fn new(n: u32, m: u32, q: impl Into<BigUint>) -> Result<Self> {
        let q = q.into();
        if n == 0 {
            return Err(Error::NTooSmall);
        }
        if n > MAX_N {
            return Err(Error::NTooLarge {
                n: n.into(),
                max: MAX_N,
            });
        }
        if m >= n {
            return Err(Error::MNotBelowN {
                m: m.into(),
                n: n.into(),
            });
        }
        if q > pow2(n) {
            return Err(Error::QExceedsDomain {
                q: q.to_string(),
                n,
            });
        }
        Ok(Self { n, m, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// Width of a truncated reply, `n - m`.
    pub fn reply_bits(&self) -> u32 {
        self.n - self.m
    }

    /// `2^n`.
    pub fn domain_size(&self) -> BigUint {
        pow2(self.n)
    }

    /// Number of distinct truncated replies, `2^(n-m)`.
    pub fn bin_count(&self) -> BigUint {
        pow2(self.n - self.m)
    }

    /// Number of `n`-bit values that truncate to the same reply, `2^m`.
    pub fn bin_capacity(&self) -> BigUint {
        pow2(self.m)
    }

    /// `q` as a machine integer, if it fits.
    pub fn q_u64(&self) -> Option<u64> {
        self.q.to_u64()
    }

    /// Same instance with a different query budget.
    pub fn with_q(&self, q: impl Into<BigUint>) -> Result<Self> {
        Self::new(self.n, self.m, q)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={}, q={})", self.n, self.m, self.q)
    }
}

/// Validates raw (possibly negative) integers into [`Params`].
pub fn validate_params(n: i64, m: i64, q: &BigInt) -> Result<Params> {
    if n < 1 {
        return Err(Error::NTooSmall);
    }
    if n > i64::from(MAX_N) {
        return Err(Error::NTooLarge { n, max: MAX_N });
    }
    if m < 0 {
        return Err(Error::MNegative(m));
    }
    if m >= n {
        return Err(Error::MNotBelowN { m, n });
    }
    if q.is_negative() {
        return Err(Error::QNegative);
    }
    let q = q.magnitude().clone();
    Params::new(n as u32, m as u32, q)
}

pub fn pow2(k: u32) -> BigUint {
    BigUint::one() << k as usize
}

/// Falling factorial `x (x-1) ... (x-k+1)`; zero once `k > x`.
pub fn falling_factorial(x: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut term = x.clone();
    for _ in 0..k {
        if term.is_zero() {
            return BigUint::zero();
        }
        acc *= &term;
        term -= 1u32;
    }
    acc
}

pub fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `log2(x)` for an arbitrarily large integer; `-inf` at zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::log2);
    }
    let shift = bits - 64;
    let top = (x >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &ExactRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    (log2_biguint(num) - log2_biguint(den)) * std::f64::consts::LN_2
}

/// Natural log of a positive rational, accurate when `x` is close to 1.
pub fn ln_rational_precise(x: &ExactRational) -> f64 {
    let delta = x - ExactRational::one();
    let d = rational_to_f64(&delta);
    if d.abs() < 0.5 {
        d.ln_1p()
    } else {
        ln_rational(x)
    }
}

pub fn rational_to_f64(x: &ExactRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `log2(2^k - 1)` without cancellation.
pub fn log2_pow2_minus_one(k: u32) -> f64 {
    f64::from(k) + (-(2f64.powi(-(k as i32)))).ln_1p() / std::f64::consts::LN_2
}

/// A probability or bound term stored as its base-2 logarithm.
///
/// Multiplication is addition of logs, so products of thousands of factors
/// near `2^-256` stay representable.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    pub const ZERO: LogProb = LogProb(f64::NEG_INFINITY);
    pub const ONE: LogProb = LogProb(0.0);

    pub fn from_log2(value: f64) -> Self {
        LogProb(value)
    }

    pub fn from_prob(p: f64) -> Self {
        debug_assert!(p >= 0.0);
        LogProb(p.log2())
    }

    pub fn pow2(k: f64) -> Self {
        LogProb(k)
    }

    pub fn log2(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp2()
    }

    pub fn powf(self, e: f64) -> Self {
        if self.0 == f64::NEG_INFINITY && e > 0.0 {
            return LogProb::ZERO;
        }
        LogProb(self.0 * e)
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    /// `1 - 2^value`, accurate for values near zero.
    pub fn complement(self) -> f64 {
        -(self.0 * std::f64::consts::LN_2).exp_m1()
    }
}

impl Mul for LogProb {
    type Output = LogProb;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        LogProb(self.0 + rhs.0)
    }
}

impl Div for LogProb {
    type Output = LogProb;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        LogProb(self.0 - rhs.0)
    }
}
