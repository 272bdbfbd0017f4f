//! Two-sample tournament returning an almost weak Copeland winner.
//!
//! Draw two independent samples `S0`, `S1` of `k` near-uniform matchings,
//! play every `M ∈ S0` against every `N ∈ S1`, and return the sampled
//! matching with the largest primed score `wins' + ties'/2`. The maximum
//! primed score is always at least `k/2`, because the `k²` elections hand
//! out exactly `k²` points between the `2k` participants.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::election::{compare_profiles, rank_profile};
use crate::error::Error;
use crate::model::{Instance, Matching};
use crate::rational::{ratio, to_f64, Rational};
use crate::sampler::{default_steps, Backend, Sampler};

/// Multiplier in `k = ⌈32 ln n / ε²⌉`.
pub const K_CONSTANT: f64 = 32.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FprasConfig {
    pub epsilon: Rational,
    pub k_override: Option<u64>,
    pub backend: Backend,
    pub seed: u64,
}

impl FprasConfig {
    /// Chain backend with `⌈10|E||V| ln(4/ε)⌉` steps, i.e. the default step
    /// count aimed at `ε/4` closeness.
    pub fn with_default_chain(inst: &Instance, epsilon: Rational, seed: u64) -> Result<Self, Error> {
        validate_epsilon(epsilon)?;
        let delta = (epsilon / Rational::from_integer(4)).min(ratio(1, 2));
        Ok(FprasConfig {
            epsilon,
            k_override: None,
            backend: Backend::Mcmc {
                steps: default_steps(inst, delta)?,
                laziness: ratio(1, 2),
            },
            seed,
        })
    }

    pub fn exact_uniform(epsilon: Rational, seed: u64) -> Self {
        FprasConfig {
            epsilon,
            k_override: None,
            backend: Backend::ExactUniform,
            seed,
        }
    }

    /// Sample size per side.
    pub fn k(&self, num_vertices: usize) -> Result<u64, Error> {
        validate_epsilon(self.epsilon)?;
        match self.k_override {
            Some(0) => Err(Error::InvalidParameter {
                name: "k",
                reason: "must be positive",
            }),
            Some(k) => Ok(k),
            None => Ok(default_k(num_vertices, self.epsilon)),
        }
    }
}

fn validate_epsilon(epsilon: Rational) -> Result<(), Error> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "must be positive",
        });
    }
    Ok(())
}

/// `⌈32 ln n / ε²⌉`, and 1 when `n ≤ 1`.
pub fn default_k(num_vertices: usize, epsilon: Rational) -> u64 {
    if num_vertices <= 1 {
        return 1;
    }
    let eps = to_f64(&epsilon);
    let k = libm::ceil(K_CONSTANT * libm::log(num_vertices as f64) / (eps * eps));
    (k as u64).max(1)
}

/// Everything the tournament produced. Side 0 is `S0`, side 1 is `S1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TournamentReport {
    pub k: u64,
    pub backend: Backend,
    pub samples: [Vec<Matching>; 2],
    pub wins: [Vec<u64>; 2],
    pub ties: [Vec<u64>; 2],
    /// `(side, position)` of the returned matching.
    pub winner_index: (usize, usize),
    pub winner: Matching,
    pub winner_primed_score: Rational,
}

impl TournamentReport {
    pub fn primed_score(&self, side: usize, pos: usize) -> Rational {
        primed(self.wins[side][pos], self.ties[side][pos])
    }

    /// Sum of primed scores over both samples; always `k²`.
    pub fn total_primed_score(&self) -> Rational {
        (0..2)
            .flat_map(|s| (0..self.samples[s].len()).map(move |p| (s, p)))
            .map(|(s, p)| self.primed_score(s, p))
            .sum()
    }

    pub fn conservation_holds(&self) -> bool {
        self.total_primed_score() == Rational::from_integer((self.k * self.k) as i128)
    }
}

fn primed(wins: u64, ties: u64) -> Rational {
    ratio(2 * wins as i128 + ties as i128, 2)
}

/// The winner's primed score is at least `k/2`.
pub fn verify_winner_bound(report: &TournamentReport) -> bool {
    report.winner_primed_score * Rational::from_integer(2) >= Rational::from_integer(report.k as i128)
}

/// Runs the tournament. Samples come from `cfg.backend`; the exact-uniform
/// backend enumerates the instance within `budget`.
pub fn run_fpras(inst: &Instance, cfg: &FprasConfig, budget: u64) -> Result<TournamentReport, Error> {
    let k = cfg.k(inst.num_vertices())?;
    let sampler = Sampler::new(inst, cfg.backend, budget)?;
    let s0 = sampler.batch(cfg.seed, 0, k as usize);
    let s1 = sampler.batch(cfg.seed, k, k as usize);
    let report = tournament(inst, k, cfg.backend, [s0, s1]);
    assert!(verify_winner_bound(&report), "winner primed score fell below k/2");
    Ok(report)
}

/// Plays the `k × k` elections between two given samples.
///
/// Identical matchings are grouped so each distinct pair is compared once;
/// the counters equal those of the plain double loop.
pub fn tournament(inst: &Instance, k: u64, backend: Backend, samples: [Vec<Matching>; 2]) -> TournamentReport {
    let mut distinct: BTreeMap<&Matching, usize> = BTreeMap::new();
    let mut ids: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for side in 0..2 {
        for m in &samples[side] {
            let next = distinct.len();
            ids[side].push(*distinct.entry(m).or_insert(next));
        }
    }
    let mut profiles = vec![Vec::new(); distinct.len()];
    for (m, &id) in &distinct {
        profiles[id] = rank_profile(inst, m);
    }
    let d = profiles.len();
    let mut mult = [vec![0u64; d], vec![0u64; d]];
    for side in 0..2 {
        for &id in &ids[side] {
            mult[side][id] += 1;
        }
    }
    // outcome[a][b] = sign of Δ(a, b), only for pairs that actually meet
    let mut outcome = vec![0i8; d * d];
    for a in 0..d {
        for b in 0..d {
            if mult[0][a] > 0 && mult[1][b] > 0 {
                outcome[a * d + b] = compare_profiles(&profiles[a], &profiles[b]).delta.signum() as i8;
            }
        }
    }
    let mut per_id = [vec![(0u64, 0u64); d], vec![(0u64, 0u64); d]];
    for a in 0..d {
        for b in 0..d {
            let (ma, mb) = (mult[0][a], mult[1][b]);
            if ma == 0 || mb == 0 {
                continue;
            }
            match outcome[a * d + b] {
                1 => per_id[0][a].0 += mb,
                0 => {
                    per_id[0][a].1 += mb;
                    per_id[1][b].1 += ma;
                }
                _ => per_id[1][b].0 += ma,
            }
        }
    }
    let wins = [0, 1].map(|s| ids[s].iter().map(|&id| per_id[s][id].0).collect::<Vec<_>>());
    let ties = [0, 1].map(|s| ids[s].iter().map(|&id| per_id[s][id].1).collect::<Vec<_>>());

    let mut best = (0usize, 0usize);
    let mut best_score = Rational::from_integer(-1);
    for side in 0..2 {
        for pos in 0..samples[side].len() {
            let s = primed(wins[side][pos], ties[side][pos]);
            if s > best_score {
                best_score = s;
                best = (side, pos);
            }
        }
    }
    let winner = samples[best.0][best.1].clone();
    TournamentReport {
        k,
        backend,
        samples,
        wins,
        ties,
        winner_index: best,
        winner,
        winner_primed_score: best_score,
    }
}
