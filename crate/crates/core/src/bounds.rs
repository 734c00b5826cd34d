//! Closed-form upper and lower bounds on the advantage, their pointwise
//! combination, and the `q_1/2` solver.
//!
//! Powers and products are taken in the log2 domain so every formula stays
//! finite for `n` up to 256. Values are reported unclamped; only
//! [`combined_bound`] is capped at 1.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::distinguish::DistinguisherSpec;
use crate::error::{Error, Result};
use crate::exact::{neumaier_sum, total_variation, MAX_EXACT_Q};
use crate::params::{log2_biguint, log2_pow2_minus_one, pow2, LogProb, Params};

/// Above this many factors the birthday product switches from a direct sum
/// of logs to a power-sum expansion.
const BIRTHDAY_DIRECT_TERMS: u64 = 1 << 20;

fn log2_q(q: &BigUint) -> f64 {
    log2_biguint(q)
}

/// `log2(q / 2^((n+m)/2))`.
fn log2_ratio(p: &Params) -> f64 {
    log2_q(p.q()) - f64::from(p.n() + p.m()) / 2.0
}

fn exp2(x: f64) -> f64 {
    x.exp2()
}

/// Probability that `q` uniform draws from `2^n` values contain a repeat:
/// `1 - prod_{k=1}^{q-1} (1 - k/2^n)`. For `m = 0` this is the exact best
/// advantage.
pub fn birthday_exact(n: u32, q: &BigUint) -> f64 {
    if *q <= BigUint::one() {
        return 0.0;
    }
    if *q > pow2(n) {
        return 1.0;
    }
    let domain = f64::from(n).exp2();
    let last = q - 1u32;
    if let Some(terms) = last.to_u64().filter(|&t| t <= BIRTHDAY_DIRECT_TERMS) {
        let logs: Vec<f64> = (1..=terms)
            .map(|k| (-(k as f64) / domain).ln_1p())
            .collect();
        return -neumaier_sum(&logs).exp_m1();
    }
    let big_q = last.to_f64().unwrap_or(f64::INFINITY);
    // -ln prod >= Q(Q+1)/2N; past 60 the complement is 1 in f64
    if big_q * (big_q + 1.0) / (2.0 * domain) > 60.0 {
        return 1.0;
    }
    // sum_{k<=Q} ln(1 - k/N) = -sum_j x^j/j * (Q/(j+1) + 1/2 + j/(12Q)), x = Q/N
    let x = big_q / domain;
    let mut terms = Vec::new();
    let mut xj = 1.0;
    for j in 1..200 {
        let jf = f64::from(j);
        xj *= x;
        let t = xj / jf * (big_q / (jf + 1.0) + 0.5 + jf / (12.0 * big_q));
        terms.push(-t);
        if t < 1e-20 * terms[0].abs() {
            break;
        }
    }
    -neumaier_sum(&terms).exp_m1()
}

/// The four closed forms bracketing the birthday advantage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthdayChain {
    /// `1 - exp(-q(q-1)/2^(n+1))`
    pub lower_exp: f64,
    /// `1 - (1 - q/2^(n+1))^(q-1)`
    pub lower_pow: f64,
    /// `1 - (1 - q/2^n)^((q-1)/2)`
    pub upper_pow: f64,
    /// `q(q-1)/2^(n+1)`
    pub upper_quadratic: f64,
}

impl BirthdayChain {
    pub fn as_tuple(&self) -> (f64, f64, f64, f64) {
        (
            self.lower_exp,
            self.lower_pow,
            self.upper_pow,
            self.upper_quadratic,
        )
    }
}

/// `q(q-1)/2^(n+1)`, the outer birthday upper bound.
pub fn birthday_upper(n: u32, q: &BigUint) -> f64 {
    if *q <= BigUint::one() {
        return 0.0;
    }
    exp2(log2_q(q) + log2_q(&(q - 1u32)) - f64::from(n + 1))
}

pub fn birthday_chain(n: u32, q: &BigUint) -> BirthdayChain {
    if *q <= BigUint::one() {
        return BirthdayChain {
            lower_exp: 0.0,
            lower_pow: 0.0,
            upper_pow: 0.0,
            upper_quadratic: 0.0,
        };
    }
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    let q1 = (q - 1u32).to_f64().unwrap_or(f64::INFINITY);
    let upper_quadratic = birthday_upper(n, q);
    let half_over_domain = exp2(log2_q(q) - f64::from(n + 1));
    BirthdayChain {
        lower_exp: -(-upper_quadratic).exp_m1(),
        lower_pow: -(q1 * (-half_over_domain).ln_1p()).exp_m1(),
        upper_pow: -((q1 / 2.0) * (-(2.0 * half_over_domain)).ln_1p()).exp_m1(),
        upper_quadratic: if qf.is_finite() {
            upper_quadratic
        } else {
            f64::INFINITY
        },
    }
}

/// `5 r^(2/3) + (1/2) r^3 2^(-(n-7m)/2)` with `r = q / 2^((n+m)/2)`.
pub fn hall_bound(p: &Params) -> f64 {
    if p.q().is_zero() {
        return 0.0;
    }
    let lr = log2_ratio(p);
    let (n, m) = (f64::from(p.n()), f64::from(p.m()));
    5.0 * exp2(2.0 * lr / 3.0) + exp2(-1.0 + 3.0 * lr - (n - 7.0 * m) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiBound {
    pub value: f64,
    /// `2^(n-m) < q < 2^((n+m)/2)`.
    pub applicable: bool,
}

/// `c n q / 2^((n+m)/2)`. The asymptotic statement carries no constant, so
/// `c` is the caller's choice and the value is indicative only.
pub fn bi_bound(p: &Params, c: f64) -> BiBound {
    let q = p.q();
    if q.is_zero() {
        return BiBound {
            value: 0.0,
            applicable: false,
        };
    }
    let value = c * f64::from(p.n()) * exp2(log2_ratio(p));
    let applicable = *q > p.bin_count() && q * q < pow2(p.n() + p.m());
    BiBound { value, applicable }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GgBranch {
    /// `m <= n/3`
    SmallM,
    /// `n/3 < m <= n - 4 - log2 n`
    LargeM,
    None,
}

impl GgBranch {
    pub fn name(self) -> &'static str {
        match self {
            GgBranch::SmallM => "small_m",
            GgBranch::LargeM => "large_m",
            GgBranch::None => "none",
        }
    }
}

pub fn gg_branch(n: u32, m: u32) -> GgBranch {
    if 3 * m <= n {
        GgBranch::SmallM
    } else if f64::from(m) <= f64::from(n) - 4.0 - f64::from(n).log2() {
        GgBranch::LargeM
    } else {
        GgBranch::None
    }
}

/// `2 2^(1/3) r^(2/3) + (2 sqrt2 / sqrt3) r^(3/2) + r^2`.
pub fn gg_small_m_formula(p: &Params) -> f64 {
    let lr = log2_ratio(p);
    2.0 * 2f64.cbrt() * exp2(2.0 * lr / 3.0)
        + 2.0 * 2f64.sqrt() / 3f64.sqrt() * exp2(1.5 * lr)
        + exp2(2.0 * lr)
}

/// `3 r^(2/3) + 2r + 5r^2 + (1/2)(2r)^(n/(n-m))`.
pub fn gg_large_m_formula(p: &Params) -> f64 {
    let lr = log2_ratio(p);
    let e = f64::from(p.n()) / f64::from(p.n() - p.m());
    3.0 * exp2(2.0 * lr / 3.0) + 2.0 * exp2(lr) + 5.0 * exp2(2.0 * lr) + 0.5 * exp2(e * (1.0 + lr))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgBound {
    pub branch: GgBranch,
    /// `None` outside both windows.
    pub value: Option<f64>,
}

pub fn gg_bound(p: &Params) -> GgBound {
    let branch = gg_branch(p.n(), p.m());
    let value = match branch {
        GgBranch::SmallM => Some(gg_small_m_formula(p)),
        GgBranch::LargeM => Some(gg_large_m_formula(p)),
        GgBranch::None => None,
    };
    GgBound { branch, value }
}

/// `(1/2) sqrt((2^(n-m) - 1) q (q-1) / ((2^n - 1)(2^n - q + 1)))`, valid for
/// every `0 <= m < n` and `q <= 2^n`.
pub fn stam_bound(p: &Params) -> f64 {
    stam_log(p).prob()
}

fn stam_log(p: &Params) -> LogProb {
    let q = p.q();
    if *q <= BigUint::one() {
        return LogProb::ZERO;
    }
    let n = p.n();
    let remaining = pow2(n) - q + 1u32;
    let num = log2_pow2_minus_one(p.reply_bits()) + log2_q(q) + log2_q(&(q - 1u32));
    let den = log2_pow2_minus_one(n) + log2_biguint(&remaining);
    (LogProb::from_log2(num) / LogProb::from_log2(den)).sqrt() * LogProb::pow2(-1.0)
}

/// `(1 / (2 sqrt(1 - (q-1)/2^n))) q / 2^((n+m)/2)`, the relaxation of
/// [`stam_bound`] obtained by dropping the `-1` terms.
pub fn stam_relaxed(p: &Params) -> f64 {
    if p.q().is_zero() {
        return 0.0;
    }
    let remaining = pow2(p.n()) - p.q() + 1u32;
    let log_slack = log2_biguint(&remaining) - f64::from(p.n());
    exp2(log2_ratio(p) - 1.0 - 0.5 * log_slack)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StamSimplified {
    /// `q / 2^((n+m)/2)`
    pub value: f64,
    /// `q <= (3/4) 2^n`
    pub applicable: bool,
}

pub fn stam_simplified(p: &Params) -> StamSimplified {
    let value = if p.q().is_zero() {
        0.0
    } else {
        exp2(log2_ratio(p))
    };
    StamSimplified {
        value,
        applicable: p.q() * 4u32 <= pow2(p.n()) * 3u32,
    }
}

/// `min(1, q(q-1)/2^(n+1), stam)`.
pub fn combined_bound(p: &Params) -> f64 {
    if *p.q() <= BigUint::one() {
        return 0.0;
    }
    1f64.min(birthday_upper(p.n(), p.q())).min(stam_bound(p))
}

/// Every closed form evaluated at one `(n, m, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: u32,
    pub m: u32,
    pub q: BigUint,
    pub birthday_exact: f64,
    pub birthday_lower: f64,
    pub birthday_upper: f64,
    pub chain: BirthdayChain,
    pub hall: f64,
    pub bi: BiBound,
    pub bi_constant: f64,
    pub gg_branch: GgBranch,
    pub gg_small_m: f64,
    pub gg_small_m_applicable: bool,
    pub gg_large_m: f64,
    pub gg_large_m_applicable: bool,
    pub stam: f64,
    pub stam_relaxed: f64,
    pub stam_simplified: StamSimplified,
    pub combined: f64,
}

impl BoundReport {
    pub fn evaluate(p: &Params, bi_constant: f64) -> Self {
        let chain = birthday_chain(p.n(), p.q());
        let branch = gg_branch(p.n(), p.m());
        Self {
            n: p.n(),
            m: p.m(),
            q: p.q().clone(),
            birthday_exact: birthday_exact(p.n(), p.q()),
            birthday_lower: chain.lower_exp,
            birthday_upper: chain.upper_quadratic,
            chain,
            hall: hall_bound(p),
            bi: bi_bound(p, bi_constant),
            bi_constant,
            gg_branch: branch,
            gg_small_m: gg_small_m_formula(p),
            gg_small_m_applicable: branch == GgBranch::SmallM,
            gg_large_m: gg_large_m_formula(p),
            gg_large_m_applicable: branch == GgBranch::LargeM,
            stam: stam_bound(p),
            stam_relaxed: stam_relaxed(p),
            stam_simplified: stam_simplified(p),
            combined: combined_bound(p),
        }
    }
}

/// How `q_1/2` is determined.
#[derive(Debug, Clone, PartialEq)]
pub enum QHalfMethod {
    Stam,
    Birthday,
    Combined,
    Hall,
    Gg,
    Bi {
        constant: f64,
    },
    Exact,
    MonteCarlo {
        distinguisher: DistinguisherSpec,
        trials: u64,
        seed: u64,
    },
}

impl QHalfMethod {
    pub fn name(&self) -> &'static str {
        match self {
            QHalfMethod::Stam => "stam",
            QHalfMethod::Birthday => "birthday",
            QHalfMethod::Combined => "combined",
            QHalfMethod::Hall => "hall",
            QHalfMethod::Gg => "gg",
            QHalfMethod::Bi { .. } => "bi",
            QHalfMethod::Exact => "exact",
            QHalfMethod::MonteCarlo { .. } => "montecarlo",
        }
    }
}

/// `stam >= 1/2`, decided in integers:
/// `(2^(n-m) - 1) q (q-1) >= (2^n - 1)(2^n - q + 1)`.
pub fn stam_reaches_half(p: &Params) -> bool {
    let q = p.q();
    if q.is_zero() {
        return false;
    }
    let domain = p.domain_size();
    (p.bin_count() - 1u32) * q * (q - 1u32) >= (&domain - 1u32) * (&domain - q + 1u32)
}

/// `q(q-1)/2^(n+1) >= 1/2`, i.e. `q(q-1) >= 2^n`.
pub fn birthday_upper_reaches_half(n: u32, q: &BigUint) -> bool {
    !q.is_zero() && q * (q - 1u32) >= pow2(n)
}

/// Smallest `q` in `[0, limit]` with `pred(q)`, assuming `pred` is monotone.
pub fn smallest_satisfying<F>(limit: &BigUint, mut pred: F) -> Result<Option<BigUint>>
where
    F: FnMut(&BigUint) -> Result<bool>,
{
    if pred(&BigUint::zero())? {
        return Ok(Some(BigUint::zero()));
    }
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one();
    loop {
        if hi >= *limit {
            hi = limit.clone();
            if !pred(&hi)? {
                return Ok(None);
            }
            break;
        }
        if pred(&hi)? {
            break;
        }
        lo = hi.clone();
        hi <<= 1;
    }
    // invariant: !pred(lo), pred(hi)
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1;
        if pred(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// `q_1/2`: the smallest `q` whose advantage (or advantage bound) reaches
/// 1/2, or `None` when no `q <= 2^n` does.
///
/// For the bound methods this is the point where an upper bound on the
/// advantage crosses 1/2, so it lower-bounds the true `q_1/2`.
pub fn q_half(n: u32, m: u32, method: &QHalfMethod) -> Result<Option<BigUint>> {
    let base = Params::new(n, m, 0u32)?;
    let limit = base.domain_size();
    let at = |q: &BigUint| base.with_q(q.clone());
    match method {
        QHalfMethod::Stam => smallest_satisfying(&limit, |q| Ok(stam_reaches_half(&at(q)?))),
        QHalfMethod::Birthday => {
            smallest_satisfying(&limit, |q| Ok(birthday_upper_reaches_half(n, q)))
        }
        QHalfMethod::Combined => smallest_satisfying(&limit, |q| {
            Ok(birthday_upper_reaches_half(n, q) && stam_reaches_half(&at(q)?))
        }),
        QHalfMethod::Hall => smallest_satisfying(&limit, |q| Ok(hall_bound(&at(q)?) >= 0.5)),
        QHalfMethod::Gg => {
            if gg_branch(n, m) == GgBranch::None {
                return Err(Error::Precondition(format!(
                    "neither Gilboa-Gueron window covers n={n}, m={m}"
                )));
            }
            smallest_satisfying(&limit, |q| {
                Ok(gg_bound(&at(q)?).value.is_some_and(|v| v >= 0.5))
            })
        }
        QHalfMethod::Bi { constant } => {
            smallest_satisfying(&limit, |q| Ok(bi_bound(&at(q)?, *constant).value >= 0.5))
        }
        QHalfMethod::Exact => q_half_exact(&base),
        QHalfMethod::MonteCarlo {
            distinguisher,
            trials,
            seed,
        } => crate::mc::q_half_monte_carlo(&base, distinguisher, *trials, *seed),
    }
}

fn q_half_exact(base: &Params) -> Result<Option<BigUint>> {
    let half = crate::params::ExactRational::new(1.into(), 2.into());
    let limit = base.domain_size().to_u64().unwrap_or(u64::MAX);
    for q in 0..=limit.min(MAX_EXACT_Q) {
        if total_variation(&base.with_q(q)?)? >= half {
            return Ok(Some(q.into()));
        }
    }
    if limit > MAX_EXACT_Q {
        return Err(Error::EnumerationEnvelope {
            q: format!("> {MAX_EXACT_Q}"),
            max: MAX_EXACT_Q,
        });
    }
    Ok(None)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn params(n: u32, m: u32, q: u64) -> Params {
        Params::new(n, m, q).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Reference values below come from scripts/reference_values.py (mpmath, 60 digits).

    #[test]
    fn birthday_spot_values() {
        assert!(close(birthday_exact(2, &2u32.into()), 0.25, 1e-15));
        for n in [1, 8, 200] {
            assert_eq!(birthday_exact(n, &0u32.into()), 0.0);
            assert_eq!(birthday_exact(n, &1u32.into()), 0.0);
        }
        assert!(close(
            birthday_exact(8, &20u32.into()),
            0.533_167_078_719_592_37,
            1e-14
        ));
        assert!(close(
            birthday_exact(40, &(1u32 << 16).into()),
            0.001_951_189_187_081_056_7,
            1e-16
        ));
        assert!(close(birthday_exact(2, &4u32.into()), 0.906_25, 1e-15));
    }

    #[test]
    fn birthday_series_branch() {
        // both sides of the direct/series switch at Q = 2^20, against lgamma references
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let q = BigUint::from((1u64 << 20) + 1);
        assert!(rel(birthday_exact(64, &q), 2.980_235_036_531_525_5e-8) < 1e-12);
        let q = BigUint::from((1u64 << 20) + 2);
        assert!(rel(birthday_exact(64, &q), 2.980_240_720_878_663_2e-8) < 1e-12);
        let q = BigUint::one() << 100;
        assert!(rel(birthday_exact(256, &q), 6.938_893_903_907_228_4e-18) < 1e-12);
        assert_eq!(birthday_exact(64, &(BigUint::one() << 40)), 1.0);
    }

    #[test]
    fn chain_spot_values() {
        let c = birthday_chain(2, &2u32.into());
        assert!(close(c.lower_exp, 0.221_199_216_928_595_13, 1e-15));
        assert!(close(c.lower_pow, 0.25, 1e-15));
        assert!(close(c.upper_pow, 0.292_893_218_813_452_48, 1e-15));
        assert!(close(c.upper_quadratic, 0.25, 1e-15));
        assert_eq!(
            birthday_chain(9, &1u32.into()).as_tuple(),
            (0.0, 0.0, 0.0, 0.0)
        );
        let c = birthday_chain(20, &1024u32.into());
        assert!(close(c.upper_quadratic, 0.499_511_718_75, 1e-15));
        assert!(close(c.upper_pow, 0.393_321_195_197_475_63, 1e-14));
        assert!(c.lower_exp <= c.lower_pow && c.lower_pow <= c.upper_pow);
    }

    #[test]
    fn hall_spot_values() {
        assert!(close(
            hall_bound(&params(28, 0, 1 << 10)),
            0.787_450_663_634_876_32,
            1e-13
        ));
        assert_eq!(hall_bound(&params(28, 0, 0)), 0.0);
        assert!(close(hall_bound(&params(7, 1, 16)), 5.5, 1e-13));
    }

    #[test]
    fn bi_window() {
        let b = bi_bound(&params(12, 8, 32), 1.0);
        assert!(b.applicable);
        assert!(close(b.value, 0.375, 1e-15));
        assert!(!bi_bound(&params(12, 8, 8), 1.0).applicable);
        assert!(!bi_bound(&params(12, 8, 1024), 1.0).applicable);
        assert_eq!(
            bi_bound(&params(12, 8, 0), 1.0),
            BiBound {
                value: 0.0,
                applicable: false
            }
        );
        assert!(close(
            bi_bound(&params(12, 8, 32), 2.5).value,
            0.9375,
            1e-15
        ));
    }

    #[test]
    fn gg_spot_values() {
        let g = gg_bound(&params(28, 0, 1 << 10));
        assert_eq!(g.branch, GgBranch::SmallM);
        assert!(close(g.value.unwrap(), 0.426_272_031_146_041_31, 1e-13));
        let g = gg_bound(&params(16, 8, 1 << 8));
        assert_eq!(g.branch, GgBranch::LargeM);
        assert!(close(g.value.unwrap(), 0.624_814_143_710_577_44, 1e-13));
        let g = gg_bound(&params(8, 7, 4));
        assert_eq!(
            g,
            GgBound {
                branch: GgBranch::None,
                value: None
            }
        );
        assert_eq!(gg_branch(9, 3), GgBranch::SmallM);
        assert_eq!(gg_branch(9, 4), GgBranch::None);
    }

    #[test]
    fn stam_spot_values() {
        assert!(close(
            stam_bound(&params(4, 1, 2)),
            0.124_721_912_892_464_71,
            1e-14
        ));
        assert_eq!(stam_bound(&params(4, 1, 0)), 0.0);
        assert_eq!(stam_bound(&params(4, 1, 1)), 0.0);
        assert!(close(stam_bound(&params(2, 1, 3)), 0.5, 1e-14));
        assert!(close(stam_bound(&params(4, 1, 7)), 0.7, 1e-14));
        assert!(stam_reaches_half(&params(2, 1, 3)));
        assert!(!stam_reaches_half(&params(2, 1, 2)));
        // q = 2^n keeps the denominator at 2^n - 2^n + 1 = 1
        assert!(stam_bound(&params(256, 0, 0).with_q(pow2(256)).unwrap()).is_finite());
    }

    #[test]
    fn simplified_and_relaxed() {
        let p = params(10, 3, 600);
        assert!(stam_simplified(&p).applicable);
        assert!(!stam_simplified(&params(10, 3, 769)).applicable);
        assert!(stam_simplified(&params(10, 3, 768)).applicable);
        assert!(stam_bound(&p) <= stam_relaxed(&p));
        assert!(stam_relaxed(&p) <= stam_simplified(&p).value);
    }

    #[test]
    fn combined_values() {
        assert_eq!(combined_bound(&params(6, 2, 1)), 0.0);
        assert!(close(combined_bound(&params(2, 1, 3)), 0.5, 1e-14));
        assert_eq!(combined_bound(&params(6, 2, 64)), 1.0);
    }

    #[test]
    fn q_half_by_bounds() {
        assert_eq!(q_half(4, 1, &QHalfMethod::Stam).unwrap(), Some(6u32.into()));
        assert_eq!(q_half(2, 1, &QHalfMethod::Stam).unwrap(), Some(3u32.into()));
        assert_eq!(q_half(1, 0, &QHalfMethod::Stam).unwrap(), Some(2u32.into()));
        // q(q-1) >= 2^8 first at q = 17
        assert_eq!(
            q_half(8, 0, &QHalfMethod::Birthday).unwrap(),
            Some(17u32.into())
        );
        let c = q_half(20, 6, &QHalfMethod::Combined).unwrap().unwrap();
        let s = q_half(20, 6, &QHalfMethod::Stam).unwrap().unwrap();
        let b = q_half(20, 6, &QHalfMethod::Birthday).unwrap().unwrap();
        assert_eq!(c, s.max(b));
    }

    #[test]
    fn q_half_matches_scan() {
        for n in 1..=10u32 {
            for m in 0..n {
                let got = q_half(n, m, &QHalfMethod::Stam).unwrap();
                let scan = (0..=1u64 << n).find(|&q| stam_reaches_half(&params(n, m, q)));
                assert_eq!(got, scan.map(BigUint::from), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn q_half_large_n() {
        let q = q_half(256, 100, &QHalfMethod::Stam).unwrap().unwrap();
        // stam ~ (1/2) q / 2^178 reaches 1/2 near q = 2^178
        let l = log2_biguint(&q);
        assert!((l - 178.0).abs() < 0.01, "{l}");
        assert!(q_half(256, 0, &QHalfMethod::Hall).unwrap().is_some());
    }

    #[test]
    fn q_half_exact_scan() {
        assert_eq!(
            q_half(2, 1, &QHalfMethod::Exact).unwrap(),
            Some(4u32.into())
        );
        // m = 0 on one bit: TV(2) = 1/2
        assert_eq!(
            q_half(1, 0, &QHalfMethod::Exact).unwrap(),
            Some(2u32.into())
        );
        assert!(q_half(6, 5, &QHalfMethod::Exact).is_err());
    }

    #[test]
    fn q_half_gg_outside_windows() {
        assert!(q_half(8, 7, &QHalfMethod::Gg).is_err());
        assert!(q_half(30, 2, &QHalfMethod::Gg).unwrap().is_some());
    }

    #[test]
    fn search_not_reached() {
        let r = smallest_satisfying(&16u32.into(), |_| Ok(false)).unwrap();
        assert_eq!(r, None);
        let r = smallest_satisfying(&16u32.into(), |q| Ok(*q >= BigUint::from(16u32))).unwrap();
        assert_eq!(r, Some(16u32.into()));
    }
}
