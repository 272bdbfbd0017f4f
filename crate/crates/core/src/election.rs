//! Head-to-head elections between matchings.
//!
//! Vertices vote by comparing their partners in the self-loop completion, so
//! being unmatched loses to any acceptable partner.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::Error;
use crate::model::{Instance, Matching, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win,
    Tie,
    Loss,
}

impl Outcome {
    pub fn from_delta(delta: i64) -> Self {
        match delta.cmp(&0) {
            Ordering::Greater => Outcome::Win,
            Ordering::Equal => Outcome::Tie,
            Ordering::Less => Outcome::Loss,
        }
    }
}

/// Tally of one election, seen from the first matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElectionResult {
    pub votes_for: u32,
    pub votes_against: u32,
    pub delta: i64,
    pub outcome: Outcome,
}

/// `+1` if `u` strictly prefers `x` to `y`, `-1` for the reverse, `0` on a
/// tie. Either option may be `u` itself (the self option).
pub fn vote(inst: &Instance, u: Vertex, x: Vertex, y: Vertex) -> Result<i8, Error> {
    let rx = inst.rank(u, x).ok_or(Error::NotAcceptable { voter: u, candidate: x })?;
    let ry = inst.rank(u, y).ok_or(Error::NotAcceptable { voter: u, candidate: y })?;
    Ok(sign(ry, rx))
}

#[inline]
pub(crate) fn sign(worse_if_larger: u32, rank: u32) -> i8 {
    match worse_if_larger.cmp(&rank) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// Rank each vertex gives its partner in the completion of `m`.
pub fn rank_profile(inst: &Instance, m: &Matching) -> Vec<u32> {
    (0..inst.num_vertices())
        .map(|u| {
            inst.rank(u, m.augmented_partner(u))
                .expect("matching was validated against the instance")
        })
        .collect()
}

/// Election between two rank profiles of the same instance.
pub fn compare_profiles(m: &[u32], n: &[u32]) -> ElectionResult {
    let mut votes_for = 0u32;
    let mut votes_against = 0u32;
    for (&rm, &rn) in m.iter().zip(n) {
        match rm.cmp(&rn) {
            Ordering::Less => votes_for += 1,
            Ordering::Greater => votes_against += 1,
            Ordering::Equal => {}
        }
    }
    let delta = i64::from(votes_for) - i64::from(votes_against);
    ElectionResult {
        votes_for,
        votes_against,
        delta,
        outcome: Outcome::from_delta(delta),
    }
}

/// `Δ(m, n)` together with both vote counts.
pub fn compare(inst: &Instance, m: &Matching, n: &Matching) -> Result<ElectionResult, Error> {
    m.validate(inst)?;
    n.validate(inst)?;
    Ok(compare_profiles(&rank_profile(inst, m), &rank_profile(inst, n)))
}

/// Lexicographically least blocking pair: an edge outside `m` whose two
/// endpoints both strictly prefer each other to their current partners.
/// Ties never block.
pub fn blocking_pair(inst: &Instance, m: &Matching) -> Option<(Vertex, Vertex)> {
    let profile = rank_profile(inst, m);
    inst.edges().iter().copied().find(|&(u, v)| {
        !m.contains(u, v)
            && inst.tier(u, v).unwrap() < profile[u]
            && inst.tier(v, u).unwrap() < profile[v]
    })
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    blocking_pair(inst, m).is_none()
}
