//! Monte Carlo advantage estimation.
//!
//! Every trial draws its transcript from its own stream, seeded from
//! `(master seed, world, trial index)`, and the per-world tallies are plain
//! counts. The result is therefore bit-identical for any thread count or
//! scheduling.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bounds::{combined_bound, smallest_satisfying, stam_bound};
use crate::distinguish::{Distinguisher, DistinguisherSpec};
use crate::error::{Error, Result};
use crate::oracle::{derive_seed, sample_replies, RngStream, World, MAX_SIMULATED_Q};
use crate::params::Params;

pub const MIN_TRIALS: u64 = 100;

const SWEEP_TAG: u64 = 0x0053_5745_4550;
const QHALF_TAG: u64 = 0x0051_4841_4c46;

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageEstimate {
    pub trials_per_world: u64,
    /// Trials in the permutation world that were guessed permutation.
    pub perm_hits: u64,
    /// Trials in the function world that were guessed permutation.
    pub func_hits: u64,
    pub p_perm_guess_given_perm: f64,
    pub p_perm_guess_given_func: f64,
    pub adv_hat: f64,
    pub ci_halfwidth_95: f64,
    pub seed: u64,
}

impl AdvantageEstimate {
    pub fn from_counts(trials: u64, perm_hits: u64, func_hits: u64, seed: u64) -> Self {
        let t = trials as f64;
        let a = perm_hits as f64 / t;
        let b = func_hits as f64 / t;
        let se = (a * (1.0 - a) / t + b * (1.0 - b) / t).sqrt();
        Self {
            trials_per_world: trials,
            perm_hits,
            func_hits,
            p_perm_guess_given_perm: a,
            p_perm_guess_given_func: b,
            adv_hat: a - b,
            ci_halfwidth_95: (Z_95 * se).max(1.0 / t),
            seed,
        }
    }
}

fn count_perm_guesses(
    p: &Params,
    d: &Distinguisher,
    world: World,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::for_trial(seed, world, i);
            let omega = sample_replies(world, p, &mut rng)?;
            Ok(u64::from(d.decide(&omega) == World::Permutation))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            trials,
            min: MIN_TRIALS,
        });
    }
    Ok(())
}

fn check_simulable(p: &Params) -> Result<()> {
    match p.q_u64() {
        Some(q) if q <= MAX_SIMULATED_Q => Ok(()),
        _ => Err(Error::SimulationEnvelope {
            q: p.q().to_string(),
            max: MAX_SIMULATED_Q,
        }),
    }
}

/// Runs `trials` transcripts per world and reports the empirical
/// advantage. Uses the ambient rayon pool; see [`with_threads`].
pub fn estimate_advantage(
    p: &Params,
    spec: &DistinguisherSpec,
    trials: u64,
    seed: u64,
) -> Result<AdvantageEstimate> {
    check_trials(trials)?;
    check_simulable(p)?;
    let d = spec.bind(p)?;
    let perm_hits = count_perm_guesses(p, &d, World::Permutation, trials, seed)?;
    let func_hits = count_perm_guesses(p, &d, World::Function, trials, seed)?;
    Ok(AdvantageEstimate::from_counts(
        trials, perm_hits, func_hits, seed,
    ))
}

/// One row of an advantage-vs-`q` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Params,
    pub estimate: AdvantageEstimate,
    pub stam: f64,
    pub combined: f64,
}

/// Seed used for the sweep row at `q`; depends only on the master seed and
/// `q`, not on the rest of the list.
pub fn sweep_row_seed(seed: u64, q: u64) -> u64 {
    derive_seed(seed, SWEEP_TAG, q)
}

pub fn sweep(
    n: u32,
    m: u32,
    q_list: &[u64],
    spec: &DistinguisherSpec,
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    check_trials(trials)?;
    let base = Params::new(n, m, 0u32)?;
    q_list
        .iter()
        .map(|&q| {
            let p = base.with_q(q)?;
            let estimate = estimate_advantage(&p, spec, trials, sweep_row_seed(seed, q))?;
            Ok(SweepRow {
                stam: stam_bound(&p),
                combined: combined_bound(&p),
                params: p,
                estimate,
            })
        })
        .collect()
}

/// Runs `f` on a dedicated pool with `threads` workers (`0` = rayon's
/// default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Smallest `q` whose estimated advantage reaches 1/2. The estimate is
/// noisy, so the bracketing search treats it as monotone; `q` values the
/// distinguisher cannot run on are skipped.
pub fn q_half_monte_carlo(
    base: &Params,
    spec: &DistinguisherSpec,
    trials: u64,
    seed: u64,
) -> Result<Option<BigUint>> {
    check_trials(trials)?;
    let domain = base.domain_size().to_u64().unwrap_or(u64::MAX);
    let limit = domain.min(MAX_SIMULATED_Q);
    // map the search index onto the admissible q values
    let step = if spec.kind == crate::distinguish::DistinguisherKind::Balance {
        2
    } else {
        1
    };
    let max_index = limit / step;
    let found = smallest_satisfying(&BigUint::from(max_index), |i| {
        let q = i.to_u64().unwrap_or(u64::MAX) * step;
        let p = base.with_q(q)?;
        if spec.check(&p).is_err() {
            return Ok(false);
        }
        let est = estimate_advantage(&p, spec, trials, derive_seed(seed, QHALF_TAG, q))?;
        Ok(est.adv_hat >= 0.5)
    })?;
    Ok(found.map(|i| i * step))
}
