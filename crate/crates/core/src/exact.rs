//! Exact transcript distributions on small instances.
//!
//! Transcripts are grouped by [`CountProfile`]: every ordered reply
//! sequence with the same profile has the same probability in each world,
//! so sums over `Omega_q` become sums over partitions of `q` weighted by
//! the number of sequences per partition. All probabilities are exact
//! rationals; floats appear only in KL and reporting.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{
    binomial, factorial, falling_factorial, ln_rational_precise, pow2, rational_to_f64,
    ExactRational, Params,
};
use crate::profile::CountProfile;

/// Largest `q` for which profiles are enumerated (p(30) = 5604 partitions).
pub const MAX_EXACT_Q: u64 = 30;

/// All count profiles of length-`q` transcripts together with how many
/// ordered transcripts share each one.
#[derive(Debug, Clone)]
pub struct ProfileEnumeration {
    params: Params,
    entries: Vec<(CountProfile, BigUint)>,
}

impl ProfileEnumeration {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn entries(&self) -> &[(CountProfile, BigUint)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities; always `(2^(n-m))^q`.
    pub fn total_sequences(&self) -> BigUint {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    /// `P_perm(S) - P_func(S)` where `S` is the set of transcripts whose
    /// profile satisfies `accept`.
    pub fn region_advantage<F>(&self, mut accept: F) -> ExactRational
    where
        F: FnMut(&CountProfile) -> bool,
    {
        let mut acc = ExactRational::zero();
        for (profile, mult) in &self.entries {
            if accept(profile) {
                let diff =
                    seq_prob_perm(profile, &self.params) - seq_prob_func(profile, &self.params);
                acc += diff * big(mult);
            }
        }
        acc
    }
}

fn big(x: &BigUint) -> ExactRational {
    ExactRational::from_integer(BigInt::from(x.clone()))
}

fn ratio(num: BigUint, den: BigUint) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn exact_q(p: &Params) -> Result<u64> {
    match p.q_u64() {
        Some(q) if q <= MAX_EXACT_Q => Ok(q),
        _ => Err(Error::EnumerationEnvelope {
            q: p.q().to_string(),
            max: MAX_EXACT_Q,
        }),
    }
}

/// Probability of any single transcript of the profile's length under the
/// random function: `2^(-(n-m) q)`.
pub fn seq_prob_func(profile: &CountProfile, p: &Params) -> ExactRational {
    let q = profile.q() as usize;
    ratio(
        BigUint::one(),
        BigUint::one() << (p.reply_bits() as usize * q),
    )
}

/// Probability of any single transcript with this profile under the
/// truncated random permutation:
/// `prod_c (2^m)_c / (2^n)_q` with `(x)_k` the falling factorial.
pub fn seq_prob_perm(profile: &CountProfile, p: &Params) -> ExactRational {
    let capacity = p.bin_capacity();
    if BigUint::from(profile.largest()) > capacity || BigUint::from(profile.len()) > p.bin_count() {
        return ExactRational::zero();
    }
    let num = profile.parts().iter().fold(BigUint::one(), |acc, &c| {
        acc * falling_factorial(&capacity, c)
    });
    ratio(num, falling_factorial(&p.domain_size(), profile.q()))
}

/// Non-increasing partitions of `total` into at most `max_len` parts.
fn partitions(total: u64, max_len: u64) -> Vec<Vec<u64>> {
    fn rec(left: u64, cap: u64, max_len: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() as u64 == max_len {
            return;
        }
        for part in (1..=cap.min(left)).rev() {
            cur.push(part);
            rec(left - part, part, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, max_len, &mut Vec::new(), &mut out);
    out
}

/// Number of ordered transcripts over `bins` labelled bins whose sorted
/// occupancies are `parts`:
/// `q! / prod(c!) * bins! / ((bins - l)! prod_s(mult_s!))`.
pub fn profile_multiplicity(parts: &[u64], bins: &BigUint) -> BigUint {
    let q: u64 = parts.iter().sum();
    let arrangements = parts
        .iter()
        .fold(factorial(q), |acc, &c| acc / factorial(c));
    let mut placements = falling_factorial(bins, parts.len() as u64);
    let mut i = 0;
    while i < parts.len() {
        let run = parts[i..].iter().take_while(|&&c| c == parts[i]).count();
        placements /= factorial(run as u64);
        i += run;
    }
    arrangements * placements
}

/// Groups `Omega_q` by count profile.
pub fn enumerate_profiles(p: &Params) -> Result<ProfileEnumeration> {
    let q = exact_q(p)?;
    let max_len = p.bin_count().to_u64().unwrap_or(u64::MAX);
    let bins = p.bin_count();
    let entries = partitions(q, max_len)
        .into_iter()
        .map(|parts| {
            let mult = profile_multiplicity(&parts, &bins);
            (CountProfile::from_parts(parts), mult)
        })
        .collect();
    Ok(ProfileEnumeration {
        params: p.clone(),
        entries,
    })
}

/// Total variation distance between the two transcript distributions, the
/// best advantage any `q`-query adversary can achieve.
pub fn total_variation(p: &Params) -> Result<ExactRational> {
    let e = enumerate_profiles(p)?;
    let mut acc = ExactRational::zero();
    for (profile, mult) in e.entries() {
        let diff = seq_prob_perm(profile, p) - seq_prob_func(profile, p);
        acc += diff.abs() * big(mult);
    }
    Ok(acc / ExactRational::from_integer(BigInt::from(2)))
}

/// `KL(P_perm || P_func)` in nats.
pub fn kl_perm_func(p: &Params) -> Result<f64> {
    let e = enumerate_profiles(p)?;
    let mut terms = Vec::with_capacity(e.len());
    for (profile, mult) in e.entries() {
        let pp = seq_prob_perm(profile, p);
        if pp.is_zero() {
            continue;
        }
        let pf = seq_prob_func(profile, p);
        let weight = rational_to_f64(&(&pp * big(mult)));
        terms.push(weight * ln_rational_precise(&(pp / pf)));
    }
    Ok(neumaier_sum(&terms))
}

pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Whether the balance test accepts `k` zeros out of `q` one-bit replies:
/// `|2k - q| < sqrt(q)/2`, evaluated as `4 (2k - q)^2 < q`.
pub fn balance_accepts(q: u64, k: u64) -> bool {
    let d = (2 * k as i128 - q as i128).unsigned_abs();
    4 * d * d < u128::from(q)
}

fn check_one_bit(p: &Params) -> Result<u64> {
    if p.m() + 1 != p.n() {
        return Err(Error::Precondition(format!(
            "balance test needs m = n - 1 (got n={}, m={})",
            p.n(),
            p.m()
        )));
    }
    let q = p.q_u64().unwrap_or(u64::MAX);
    if !q.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "balance test needs even q (got {q})"
        )));
    }
    if BigUint::from(q) > pow2(p.n() - 1) {
        return Err(Error::Precondition(format!(
            "balance test needs q <= 2^(n-1) (got q={q}, n={})",
            p.n()
        )));
    }
    Ok(q)
}

/// Falling factorials and binomials over the window of `k` the balance
/// test accepts.
struct BalanceTerms {
    q: u64,
    /// `(2^(n-1))_k (2^(n-1))_(q-k)` for each accepted `k`, with `C(q, k)`.
    rows: Vec<(u64, BigUint, BigUint)>,
    /// `(2^n)_q`.
    domain_ff: BigUint,
}

impl BalanceTerms {
    fn new(q: u64, n: u32) -> Self {
        let half = pow2(n - 1);
        let ks: Vec<u64> = (0..=q).filter(|&k| balance_accepts(q, k)).collect();
        let mut rows = Vec::with_capacity(ks.len());
        if let (Some(&lo), Some(&hi)) = (ks.first(), ks.last()) {
            // the window is symmetric, so (half)_j for j in lo..=hi covers both factors
            let mut ff = Vec::with_capacity((hi - lo + 1) as usize);
            let mut cur = falling_factorial(&half, lo);
            for j in lo..=hi {
                if j > lo {
                    cur *= &half - BigUint::from(j - 1);
                }
                ff.push(cur.clone());
            }
            let mut c = binomial(q, lo);
            for k in lo..=hi {
                if k > lo {
                    c = c * (q - k + 1) / k;
                }
                let prod = &ff[(k - lo) as usize] * &ff[(q - k - lo) as usize];
                rows.push((k, prod, c.clone()));
            }
        }
        let domain_ff = falling_factorial(&pow2(n), q);
        Self { q, rows, domain_ff }
    }

    fn advantage(&self) -> ExactRational {
        let scale = BigUint::one() << self.q as usize;
        let base = BigInt::from(self.domain_ff.clone());
        let mut num = BigInt::zero();
        for (_, prod, c) in &self.rows {
            num += BigInt::from(c.clone()) * (BigInt::from(prod * &scale) - &base);
        }
        ExactRational::new(num, BigInt::from(&self.domain_ff * &scale))
    }
}

/// Exact advantage of the balance test on one-bit replies (`m = n - 1`,
/// even `q <= 2^(n-1)`):
/// `sum_{4(2k-q)^2 < q} C(q,k) (P_perm(k zeros) - 2^-q)`.
pub fn alg1_exact_advantage(p: &Params) -> Result<ExactRational> {
    let q = check_one_bit(p)?;
    Ok(BalanceTerms::new(q, p.n()).advantage())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCheck {
    pub k: u64,
    /// `C(q,k) 2^-q >= 1/(2 sqrt q)`.
    pub binomial_ok: bool,
    /// `p_k > 1 + (q/2)/2^n`.
    pub ratio_ok: bool,
}

/// Outcome of checking the inequalities behind the balance test's lower
/// bound on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessReport {
    pub n: u32,
    pub q: u64,
    pub checks: Vec<KCheck>,
    /// `C(q,q/2) 2^-q >= 1/sqrt(2q)`.
    pub anchor_binomial_ok: bool,
    /// `p_(q/2) >= 1 + q/2^n`.
    pub anchor_ratio_ok: bool,
    pub advantage: ExactRational,
    /// `advantage > (q/4)/2^n`.
    pub lower_bound_ok: bool,
}

impl SharpnessReport {
    pub fn all_hold(&self) -> bool {
        self.counterexample().is_none()
            && self.anchor_binomial_ok
            && self.anchor_ratio_ok
            && self.lower_bound_ok
    }

    /// First accepted `k` at which a per-`k` inequality fails.
    pub fn counterexample(&self) -> Option<u64> {
        self.checks
            .iter()
            .find(|c| !(c.binomial_ok && c.ratio_ok))
            .map(|c| c.k)
    }

    /// `advantage * 2^n / q`.
    pub fn scaled_advantage(&self) -> f64 {
        let scale = ratio(pow2(self.n), BigUint::from(self.q));
        rational_to_f64(&(&self.advantage * scale))
    }

    /// `(q/4)/2^n`.
    pub fn lower_bound(&self) -> ExactRational {
        ratio(BigUint::from(self.q), pow2(self.n + 2))
    }
}

/// Checks, for every accepted `k`, the binomial and likelihood-ratio
/// inequalities that give the balance test advantage above `(q/4)/2^n`,
/// plus their anchors at `k = q/2`. Needs `q >= 2`.
pub fn alg1_sharpness_checks(p: &Params) -> Result<SharpnessReport> {
    let q = check_one_bit(p)?;
    if q < 2 {
        return Err(Error::Precondition("sharpness checks need q >= 2".into()));
    }
    let n = p.n();
    let terms = BalanceTerms::new(q, n);
    let four_pow_q = BigUint::one() << (2 * q) as usize;
    let scale = BigUint::one() << q as usize;
    let ffn = &terms.domain_ff;
    let lhs_ratio = |prod: &BigUint, shift: u32| (prod * &scale) << shift as usize;

    let checks = terms
        .rows
        .iter()
        .map(|(k, prod, c)| KCheck {
            k: *k,
            binomial_ok: BigUint::from(4 * q) * c * c >= four_pow_q,
            ratio_ok: lhs_ratio(prod, n + 1) > (pow2(n + 1) + q) * ffn,
        })
        .collect();

    let (_, mid_prod, mid_c) = terms
        .rows
        .iter()
        .find(|(k, _, _)| *k == q / 2)
        .expect("k = q/2 is always accepted");
    let anchor_binomial_ok = BigUint::from(2 * q) * mid_c * mid_c >= four_pow_q;
    let anchor_ratio_ok = lhs_ratio(mid_prod, n) >= (pow2(n) + q) * ffn;

    let advantage = terms.advantage();
    let scaled = &advantage * ExactRational::from_integer(BigInt::from(pow2(n + 2)));
    let lower_bound_ok = scaled > ExactRational::from_integer(BigInt::from(q));
    Ok(SharpnessReport {
        n,
        q,
        checks,
        anchor_binomial_ok,
        anchor_ratio_ok,
        advantage,
        lower_bound_ok,
    })
}
