//! Brute-force reference computations. Nothing here goes through the
//! profile enumeration; transcripts are listed one by one.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Transcript -> (P_perm, P_func), over every reply tuple that has positive
/// probability in either world.
pub fn transcript_distributions(
    n: u32,
    m: u32,
    q: u32,
) -> BTreeMap<Vec<u64>, (BigRational, BigRational)> {
    let domain = 1u64 << n;
    let replies = 1u64 << (n - m);
    let mut out: BTreeMap<Vec<u64>, (BigRational, BigRational)> = BTreeMap::new();

    // function world: every reply tuple is equally likely
    let p_func = BigRational::new(BigInt::one(), BigInt::from(replies).pow(q));
    for t in tuples(replies, q) {
        out.entry(t)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()))
            .1 = p_func.clone();
    }

    // permutation world: every ordered tuple of distinct inputs' images
    let distinct = distinct_tuples(domain, q);
    let p_tuple = BigRational::new(BigInt::one(), BigInt::from(distinct.len()));
    for t in distinct {
        let reply: Vec<u64> = t.iter().map(|v| v >> m).collect();
        let e = out
            .entry(reply)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        e.0 += &p_tuple;
    }
    out
}

pub fn brute_tv(n: u32, m: u32, q: u32) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sum: BigRational = transcript_distributions(n, m, q)
        .values()
        .map(|(a, b)| (a - b).abs())
        .fold(BigRational::zero(), |acc, x| acc + x);
    sum * half
}

/// Multiset of reply counts, sorted descending.
pub fn occupancy(t: &[u64]) -> Vec<u64> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &v in t {
        *counts.entry(v).or_default() += 1;
    }
    let mut parts: Vec<u64> = counts.into_values().collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Occupancy -> (number of transcripts, P_perm mass, P_func mass).
pub fn occupancy_masses(
    n: u32,
    m: u32,
    q: u32,
) -> BTreeMap<Vec<u64>, (u64, BigRational, BigRational)> {
    let mut out: BTreeMap<Vec<u64>, (u64, BigRational, BigRational)> = BTreeMap::new();
    for (t, (pp, pf)) in transcript_distributions(n, m, q) {
        let e = out
            .entry(occupancy(&t))
            .or_insert_with(|| (0, BigRational::zero(), BigRational::zero()));
        e.0 += 1;
        e.1 += pp;
        e.2 += pf;
    }
    out
}

/// All `k^q` tuples over `0..k`.
pub fn tuples(k: u64, q: u32) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// All ordered tuples of `q` distinct values from `0..k`.
pub fn distinct_tuples(k: u64, q: u32) -> Vec<Vec<u64>> {
    tuples(k, q)
        .into_iter()
        .filter(|t| occupancy(t).iter().all(|&c| c == 1))
        .collect()
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}
