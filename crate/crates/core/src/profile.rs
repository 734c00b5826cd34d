//! Bin occupancies of a transcript and the collision counters built on
//! them.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::oracle::ReplySequence;
use crate::params::{binomial, Params};

/// Sorted (non-increasing) occupancies of the nonempty bins of a
/// transcript. Both worlds assign a transcript a probability that depends
/// only on this multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountProfile {
    parts: Vec<u64>,
}

impl CountProfile {
    /// Builds a profile from arbitrary positive parts.
    pub fn from_parts(mut parts: Vec<u64>) -> Self {
        parts.retain(|&c| c > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Transcript length.
    pub fn q(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of distinct replies.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> u64 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Whether some permutation could have produced it: at most `2^(n-m)`
    /// bins, each holding at most `2^m` replies.
    pub fn permutation_feasible(&self, p: &Params) -> bool {
        BigUint::from(self.len()) <= p.bin_count()
            && BigUint::from(self.largest()) <= p.bin_capacity()
    }

    /// `col_j`: `sum_c C(c, j)`.
    pub fn col(&self, j: u64) -> Result<BigUint> {
        if j < 2 {
            return Err(Error::Precondition(format!("col_j needs j >= 2 (got {j})")));
        }
        Ok(self
            .parts
            .iter()
            .filter(|&&c| c >= j)
            .fold(BigUint::zero(), |acc, &c| acc + binomial(c, j)))
    }

    /// Number of colliding pairs, `col_2`.
    pub fn pairs(&self) -> u128 {
        self.parts
            .iter()
            .map(|&c| u128::from(c) * u128::from(c.saturating_sub(1)) / 2)
            .sum()
    }
}

/// Sorted bin occupancies of `omega`.
pub fn count_profile(omega: &ReplySequence, p: &Params) -> CountProfile {
    debug_assert!(omega.fits(p));
    profile_of(omega)
}

pub(crate) fn profile_of(omega: &ReplySequence) -> CountProfile {
    let mut sorted = omega.replies().to_vec();
    sorted.sort_unstable();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        parts.push((j - i) as u64);
        i = j;
    }
    CountProfile::from_parts(parts)
}

/// Number of index `j`-subsets of `omega` whose replies all agree.
pub fn col_j(omega: &ReplySequence, j: u64) -> Result<BigUint> {
    profile_of(omega).col(j)
}
