//! Seeded samplers for one transcript of truncated replies under either
//! world.
//!
//! Queries are never modelled explicitly: for distinct queries both reply
//! distributions are exchangeable and do not depend on which points are
//! asked, so a transcript is just `q` draws from the right distribution.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::Params;

/// Largest query budget the samplers accept.
pub const MAX_SIMULATED_Q: u64 = 1 << 24;

/// Domains up to this many bits may use the dense shuffle path.
const DENSE_MAX_BITS: u32 = 24;

/// Which object the oracle sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum World {
    Permutation,
    Function,
}

impl World {
    pub fn tag(self) -> u64 {
        match self {
            World::Permutation => 1,
            World::Function => 0,
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            World::Permutation => "permutation",
            World::Function => "function",
        })
    }
}

/// Unsigned 256-bit value, little-endian limbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word([u64; 4]);

impl Word {
    pub const ZERO: Word = Word([0; 4]);

    pub fn random_bits<R: RngCore + ?Sized>(bits: u32, rng: &mut R) -> Self {
        let mut limbs = [0u64; 4];
        let mut left = bits;
        for limb in limbs.iter_mut() {
            if left == 0 {
                break;
            }
            let v = rng.next_u64();
            *limb = if left >= 64 {
                v
            } else {
                v & ((1u64 << left) - 1)
            };
            left = left.saturating_sub(64);
        }
        Word(limbs)
    }

    /// Drops the low `k` bits.
    pub fn truncate(self, k: u32) -> Self {
        let limb_shift = (k / 64) as usize;
        let bit_shift = k % 64;
        let mut out = [0u64; 4];
        for (i, slot) in out
            .iter_mut()
            .enumerate()
            .take(4usize.saturating_sub(limb_shift))
        {
            let lo = self.0[i + limb_shift] >> bit_shift;
            let hi = if bit_shift > 0 && i + limb_shift + 1 < 4 {
                self.0[i + limb_shift + 1] << (64 - bit_shift)
            } else {
                0
            };
            *slot = lo | hi;
        }
        Word(out)
    }

    pub fn bit_len(&self) -> u32 {
        for i in (0..4).rev() {
            if self.0[i] != 0 {
                return 64 * i as u32 + (64 - self.0[i].leading_zeros());
            }
        }
        0
    }

    pub fn as_u64(&self) -> Option<u64> {
        (self.0[1..].iter().all(|&l| l == 0)).then_some(self.0[0])
    }

    pub fn to_biguint(&self) -> BigUint {
        let digits: Vec<u32> = self
            .0
            .iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect();
        BigUint::new(digits)
    }
}

impl From<u64> for Word {
    fn from(v: u64) -> Self {
        Word([v, 0, 0, 0])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_u64() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}", self.to_biguint()),
        }
    }
}

/// One oracle transcript: `q` truncated replies in query order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReplySequence {
    replies: Vec<Word>,
}

impl ReplySequence {
    pub fn new(replies: Vec<Word>) -> Self {
        Self { replies }
    }

    /// Checks that every reply is an `(n - m)`-bit value.
    pub fn fits(&self, p: &Params) -> bool {
        self.replies.iter().all(|w| w.bit_len() <= p.reply_bits())
    }

    pub fn replies(&self) -> &[Word] {
        &self.replies
    }

    pub fn len(&self) -> usize {
        self.replies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replies.is_empty()
    }
}

impl From<Vec<u64>> for ReplySequence {
    fn from(v: Vec<u64>) -> Self {
        Self::new(v.into_iter().map(Word::from).collect())
    }
}

impl<const N: usize> From<[u64; N]> for ReplySequence {
    fn from(v: [u64; N]) -> Self {
        Self::from(v.to_vec())
    }
}

/// Deterministic pseudorandom stream keyed by a 64-bit seed.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Stream for trial `index` of `world` under a master seed.
    pub fn for_trial(master: u64, world: World, index: u64) -> Self {
        Self::from_seed(derive_seed(master, world.tag(), index))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit sub-seed for `(master, tag, index)`.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    splitmix(splitmix(splitmix(master) ^ tag) ^ index)
}

fn simulated_q(p: &Params) -> Result<usize> {
    match p.q_u64() {
        Some(q) if q <= MAX_SIMULATED_Q => Ok(q as usize),
        _ => Err(Error::SimulationEnvelope {
            q: p.q().to_string(),
            max: MAX_SIMULATED_Q,
        }),
    }
}

/// Truncated replies of a uniform random function at `q` distinct points.
pub fn sample_function_replies(p: &Params, rng: &mut RngStream) -> Result<ReplySequence> {
    let q = simulated_q(p)?;
    let bits = p.reply_bits();
    Ok(ReplySequence::new(
        (0..q).map(|_| Word::random_bits(bits, rng)).collect(),
    ))
}

/// `q` distinct `n`-bit values, uniform without replacement, before
/// truncation.
pub fn sample_permutation_values(p: &Params, rng: &mut RngStream) -> Result<Vec<Word>> {
    let q = simulated_q(p)?;
    let n = p.n();
    if n <= DENSE_MAX_BITS && 2 * q as u64 > 1u64 << n {
        // partial Fisher-Yates over the whole domain
        let size = 1u32 << n;
        let mut domain: Vec<u32> = (0..size).collect();
        for i in 0..q {
            let j = rng.random_range(i as u32..size) as usize;
            domain.swap(i, j);
        }
        return Ok(domain[..q]
            .iter()
            .map(|&v| Word::from(u64::from(v)))
            .collect());
    }
    let mut seen = HashSet::with_capacity(q);
    let mut out = Vec::with_capacity(q);
    while out.len() < q {
        let v = Word::random_bits(n, rng);
        if seen.insert(v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Truncated replies of a uniform random permutation at `q` distinct points.
pub fn sample_permutation_replies(p: &Params, rng: &mut RngStream) -> Result<ReplySequence> {
    let m = p.m();
    let values = sample_permutation_values(p, rng)?;
    Ok(ReplySequence::new(
        values.into_iter().map(|v| v.truncate(m)).collect(),
    ))
}

pub fn sample_replies(world: World, p: &Params, rng: &mut RngStream) -> Result<ReplySequence> {
    match world {
        World::Permutation => sample_permutation_replies(p, rng),
        World::Function => sample_function_replies(p, rng),
    }
}
