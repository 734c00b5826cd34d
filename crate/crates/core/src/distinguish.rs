//! Guessing strategies: a transcript goes in, a guess about the world
//! comes out. Every strategy here depends on the transcript only through
//! its count profile, which is what makes their exact advantage
//! computable from a profile enumeration.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::{balance_accepts, enumerate_profiles, exact_q, seq_prob_func, seq_prob_perm};
use crate::oracle::{ReplySequence, Word, World};
use crate::params::{log2_pow2_minus_one, ExactRational, Params};
use crate::profile::{profile_of, CountProfile};

/// A distinguisher's output.
pub type Guess = World;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistinguisherKind {
    /// Threshold on the number of colliding reply pairs.
    Collision,
    /// Zero/one balance test on one-bit replies.
    Balance,
    /// Likelihood-ratio test, optimal by construction.
    Bayes,
}

impl DistinguisherKind {
    pub fn name(self) -> &'static str {
        match self {
            DistinguisherKind::Collision => "collision",
            DistinguisherKind::Balance => "balance",
            DistinguisherKind::Bayes => "bayes",
        }
    }
}

impl fmt::Display for DistinguisherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistinguisherKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collision" => Ok(DistinguisherKind::Collision),
            "balance" => Ok(DistinguisherKind::Balance),
            "bayes" => Ok(DistinguisherKind::Bayes),
            other => Err(Error::Precondition(format!(
                "unknown distinguisher {other:?}"
            ))),
        }
    }
}

/// Which distinguisher to run, before it is bound to an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguisherSpec {
    pub kind: DistinguisherKind,
    /// Collision threshold; the midpoint default is used when absent.
    pub threshold: Option<f64>,
}

impl DistinguisherSpec {
    pub fn new(kind: DistinguisherKind) -> Self {
        Self {
            kind,
            threshold: None,
        }
    }

    pub fn collision(threshold: Option<f64>) -> Self {
        Self {
            kind: DistinguisherKind::Collision,
            threshold,
        }
    }

    /// Cheap precondition check, without building lookup tables.
    pub fn check(&self, p: &Params) -> Result<()> {
        match self.kind {
            DistinguisherKind::Collision => match self.threshold {
                Some(t) if t.is_nan() || t < 0.0 => Err(Error::Precondition(format!(
                    "collision threshold must be >= 0 (got {t})"
                ))),
                _ => Ok(()),
            },
            DistinguisherKind::Balance => check_balance(p),
            DistinguisherKind::Bayes => exact_q(p).map(|_| ()),
        }
    }

    pub fn bind(&self, p: &Params) -> Result<Distinguisher> {
        self.check(p)?;
        Ok(match self.kind {
            DistinguisherKind::Collision => Distinguisher::Collision {
                threshold: self
                    .threshold
                    .unwrap_or_else(|| default_collision_threshold(p)),
            },
            DistinguisherKind::Balance => Distinguisher::Balance,
            DistinguisherKind::Bayes => Distinguisher::Bayes(BayesTable::new(p)?),
        })
    }
}

/// A distinguisher bound to one instance.
#[derive(Debug, Clone)]
pub enum Distinguisher {
    Collision { threshold: f64 },
    Balance,
    Bayes(BayesTable),
}

impl Distinguisher {
    pub fn decide(&self, omega: &ReplySequence) -> Guess {
        match self {
            Distinguisher::Collision { threshold } => {
                collision_guess(profile_of(omega).pairs(), *threshold)
            }
            Distinguisher::Balance => balance_guess(omega),
            Distinguisher::Bayes(table) => table.decide(&profile_of(omega)),
        }
    }

    /// Same decision from the transcript's count profile.
    pub fn decide_profile(&self, profile: &CountProfile) -> Guess {
        match self {
            Distinguisher::Collision { threshold } => collision_guess(profile.pairs(), *threshold),
            Distinguisher::Balance => {
                // bins hold the zero and one counts; which is which does not matter
                let parts = profile.parts();
                let a = parts.first().copied().unwrap_or(0);
                let b = parts.get(1).copied().unwrap_or(0);
                if balance_accepts(a + b, b) {
                    World::Permutation
                } else {
                    World::Function
                }
            }
            Distinguisher::Bayes(table) => table.decide(profile),
        }
    }

    /// Exact advantage `P(guess perm | perm) - P(guess perm | func)`.
    pub fn exact_advantage(&self, p: &Params) -> Result<ExactRational> {
        let e = enumerate_profiles(p)?;
        Ok(e.region_advantage(|c| self.decide_profile(c) == World::Permutation))
    }
}

/// Per-profile decisions of the likelihood-ratio test.
#[derive(Debug, Clone)]
pub struct BayesTable {
    decisions: HashMap<CountProfile, Guess>,
}

impl BayesTable {
    pub fn new(p: &Params) -> Result<Self> {
        let e = enumerate_profiles(p)?;
        let decisions = e
            .entries()
            .iter()
            .map(|(c, _)| (c.clone(), bayes_profile_guess(c, p)))
            .collect();
        Ok(Self { decisions })
    }

    pub fn decide(&self, profile: &CountProfile) -> Guess {
        self.decisions
            .get(profile)
            .copied()
            .unwrap_or(World::Function)
    }
}

fn bayes_profile_guess(profile: &CountProfile, p: &Params) -> Guess {
    if seq_prob_perm(profile, p) >= seq_prob_func(profile, p) {
        World::Permutation
    } else {
        World::Function
    }
}

/// Midpoint of the expected colliding-pair counts in the two worlds:
/// `(1/2) C(q,2) (1/2^(n-m) + (2^m - 1)/(2^n - 1))`.
pub fn default_collision_threshold(p: &Params) -> f64 {
    let q = p.q().to_f64().unwrap_or(f64::INFINITY);
    let pairs = q * (q - 1.0) / 2.0;
    pairs / 2.0 * (expected_pair_rate_function(p) + expected_pair_rate_permutation(p))
}

/// `P(two replies collide)` under the random function: `2^-(n-m)`.
pub fn expected_pair_rate_function(p: &Params) -> f64 {
    (-f64::from(p.reply_bits())).exp2()
}

/// `P(two replies collide)` under the random permutation:
/// `(2^m - 1)/(2^n - 1)`.
pub fn expected_pair_rate_permutation(p: &Params) -> f64 {
    if p.m() == 0 {
        return 0.0;
    }
    (log2_pow2_minus_one(p.m()) - log2_pow2_minus_one(p.n())).exp2()
}

fn collision_guess(pairs: u128, threshold: f64) -> Guess {
    if pairs as f64 >= threshold {
        World::Function
    } else {
        World::Permutation
    }
}

/// Guesses function iff the transcript has at least `threshold` colliding
/// pairs.
pub fn collision_decide(omega: &ReplySequence, p: &Params, threshold: f64) -> Result<Guess> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Precondition(format!(
            "collision threshold must be >= 0 (got {threshold})"
        )));
    }
    debug_assert!(omega.fits(p));
    Ok(collision_guess(profile_of(omega).pairs(), threshold))
}

fn check_balance(p: &Params) -> Result<()> {
    if p.m() + 1 != p.n() {
        return Err(Error::Precondition(format!(
            "balance distinguisher needs m = n - 1 (got n={}, m={})",
            p.n(),
            p.m()
        )));
    }
    if (p.q() % 2u32) == BigUint::one() {
        return Err(Error::Precondition(format!(
            "balance distinguisher needs even q (got {})",
            p.q()
        )));
    }
    Ok(())
}

fn balance_guess(omega: &ReplySequence) -> Guess {
    let zeros = omega.replies().iter().filter(|&&w| w == Word::ZERO).count() as u64;
    if balance_accepts(omega.len() as u64, zeros) {
        World::Permutation
    } else {
        World::Function
    }
}

/// One-bit balance test: with `D = |#0 - #1|`, guesses permutation iff
/// `4 D^2 < q`.
pub fn balance_decide(omega: &ReplySequence, p: &Params) -> Result<Guess> {
    check_balance(p)?;
    debug_assert_eq!(BigUint::from(omega.len()), *p.q());
    Ok(balance_guess(omega))
}

/// Likelihood-ratio test; ties go to permutation.
pub fn bayes_decide(omega: &ReplySequence, p: &Params) -> Result<Guess> {
    exact_q(p)?;
    Ok(bayes_profile_guess(&profile_of(omega), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{alg1_exact_advantage, total_variation};

    fn params(n: u32, m: u32, q: u32) -> Params {
        Params::new(n, m, q).unwrap()
    }

    fn w(v: &[u64]) -> ReplySequence {
        ReplySequence::from(v.to_vec())
    }

    #[test]
    fn collision_examples() {
        let p = params(4, 0, 4);
        assert_eq!(
            collision_decide(&w(&[1, 2, 3, 4]), &p, 1.0).unwrap(),
            World::Permutation
        );
        let p = params(2, 1, 2);
        let theta = 0.5 * (0.5 + 1.0 / 3.0);
        assert!((default_collision_threshold(&p) - theta).abs() < 1e-15);
        assert_eq!(
            collision_decide(&w(&[0, 0]), &p, theta).unwrap(),
            World::Function
        );
        assert_eq!(
            collision_decide(&w(&[0, 1]), &p, theta).unwrap(),
            World::Permutation
        );
        assert!(collision_decide(&w(&[0, 1]), &p, -1.0).is_err());
    }

    #[test]
    fn default_threshold_at_scale() {
        let p = params(16, 8, 4096);
        // C(4096,2)/2 * (1/256 + 255/65535), and 255/65535 = 1/257
        let want = 8_386_560.0 / 2.0 * (1.0 / 256.0 + 1.0 / 257.0);
        let t = default_collision_threshold(&p);
        assert!((t - want).abs() < 1e-8, "{t}");
        assert!((t - 32_696.264_591).abs() < 1e-5);
    }

    #[test]
    fn balance_examples() {
        let p = params(1, 0, 2);
        assert_eq!(balance_decide(&w(&[0, 1]), &p).unwrap(), World::Permutation);
        assert_eq!(balance_decide(&w(&[1, 1]), &p).unwrap(), World::Function);
        let p = params(5, 4, 16);
        let mut nine = vec![1; 9];
        nine.extend([0; 7]);
        assert_eq!(balance_decide(&w(&nine), &p).unwrap(), World::Function);
        let mut eight = vec![1; 8];
        eight.extend([0; 8]);
        assert_eq!(balance_decide(&w(&eight), &p).unwrap(), World::Permutation);
        assert!(balance_decide(&w(&[0, 1]), &params(8, 4, 2)).is_err());
        assert!(balance_decide(&w(&[0, 1, 1]), &params(3, 2, 3)).is_err());
    }

    #[test]
    fn balance_is_symmetric_under_complement() {
        let p = params(6, 5, 10);
        for mask in 0u32..1 << 10 {
            let bits: Vec<u64> = (0..10).map(|i| u64::from((mask >> i) & 1)).collect();
            let flipped: Vec<u64> = bits.iter().map(|b| 1 - b).collect();
            assert_eq!(
                balance_decide(&w(&bits), &p).unwrap(),
                balance_decide(&w(&flipped), &p).unwrap()
            );
        }
    }

    #[test]
    fn bayes_examples() {
        let p = params(2, 1, 2);
        assert_eq!(bayes_decide(&w(&[0, 1]), &p).unwrap(), World::Permutation);
        assert_eq!(bayes_decide(&w(&[0, 0]), &p).unwrap(), World::Function);
        let p = params(2, 1, 3);
        assert_eq!(bayes_decide(&w(&[0, 0, 0]), &p).unwrap(), World::Function);
        let d = DistinguisherSpec::new(DistinguisherKind::Bayes)
            .bind(&p)
            .unwrap();
        assert_eq!(d.decide(&w(&[0, 0, 0])), World::Function);
        assert_eq!(d.decide(&w(&[0, 1, 0])), World::Permutation);
    }

    #[test]
    fn bayes_attains_tv() {
        for n in 1..=5 {
            for m in 0..n {
                for q in 0..=(1u32 << n).min(8) {
                    let p = params(n, m, q);
                    let d = DistinguisherSpec::new(DistinguisherKind::Bayes)
                        .bind(&p)
                        .unwrap();
                    assert_eq!(d.exact_advantage(&p).unwrap(), total_variation(&p).unwrap());
                }
            }
        }
    }

    #[test]
    fn balance_region_matches_alg1() {
        for n in 2..=6 {
            let mut q = 0;
            while q <= (1 << (n - 1)).min(20) {
                let p = params(n, n - 1, q);
                let d = DistinguisherSpec::new(DistinguisherKind::Balance)
                    .bind(&p)
                    .unwrap();
                assert_eq!(
                    d.exact_advantage(&p).unwrap(),
                    alg1_exact_advantage(&p).unwrap()
                );
                q += 2;
            }
        }
    }

    #[test]
    fn no_distinguisher_beats_tv() {
        for n in 1..=5 {
            for m in 0..n {
                for q in 0..=(1u32 << n).min(10) {
                    let p = params(n, m, q);
                    let tv = total_variation(&p).unwrap();
                    let d = DistinguisherSpec::collision(None).bind(&p).unwrap();
                    assert!(d.exact_advantage(&p).unwrap() <= tv);
                    if let Ok(d) = DistinguisherSpec::new(DistinguisherKind::Balance).bind(&p) {
                        assert!(d.exact_advantage(&p).unwrap() <= tv);
                    }
                }
            }
        }
    }

    #[test]
    fn kind_parsing() {
        for k in [
            DistinguisherKind::Collision,
            DistinguisherKind::Balance,
            DistinguisherKind::Bayes,
        ] {
            assert_eq!(k.name().parse::<DistinguisherKind>().unwrap(), k);
        }
        assert!("optimal".parse::<DistinguisherKind>().is_err());
    }
}
