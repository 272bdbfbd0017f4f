//! Exhaustive enumeration of matchings and everything that is defined over
//! the whole candidate set: Copeland scores, popularity notions and the
//! marginals of the uniform distribution over matchings.
//!
//! Everything here is exponential in the instance size and guarded by a
//! matching-count budget.

use alloc::vec;
use alloc::vec::Vec;

use crate::election::{compare_profiles, rank_profile};
use crate::error::Error;
use crate::model::{Instance, Matching, Vertex};
use crate::rational::{ratio, Rational};

/// Default cap on the number of enumerated matchings.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Calls `visit` on every matching of `inst`, the empty matching first.
///
/// Edges are decided in sorted order, "leave out" before "take", which
/// fixes the enumeration order used for all tie-breaking in this module.
/// Returns the number of matchings.
pub fn for_each_matching<F: FnMut(&Matching)>(
    inst: &Instance,
    budget: u64,
    mut visit: F,
) -> Result<u64, Error> {
    struct Walk<'a, F> {
        edges: &'a [(Vertex, Vertex)],
        current: Matching,
        count: u64,
        budget: u64,
        visit: F,
    }

    impl<F: FnMut(&Matching)> Walk<'_, F> {
        fn go(&mut self, i: usize) -> Result<(), Error> {
            if i == self.edges.len() {
                self.count += 1;
                if self.count > self.budget {
                    return Err(Error::BudgetExceeded { budget: self.budget });
                }
                (self.visit)(&self.current);
                return Ok(());
            }
            self.go(i + 1)?;
            let (u, v) = self.edges[i];
            if !self.current.is_matched(u) && !self.current.is_matched(v) {
                self.current.link(u, v);
                let r = self.go(i + 1);
                self.current.unlink(u);
                r?;
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        edges: inst.edges(),
        current: Matching::empty(inst.num_vertices()),
        count: 0,
        budget,
        visit: &mut visit,
    };
    walk.go(0)?;
    Ok(walk.count)
}

/// All matchings of `inst` in enumeration order.
pub fn enumerate_matchings(inst: &Instance, budget: u64) -> Result<Vec<Matching>, Error> {
    let mut out = Vec::new();
    for_each_matching(inst, budget, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Number of matchings, without storing them.
pub fn count_matchings(inst: &Instance, budget: u64) -> Result<u64, Error> {
    for_each_matching(inst, budget, |_| {})
}

/// Head-to-head record of one matching against all `μ` matchings,
/// itself included (the self-comparison is a tie).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScoreRecord {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
}

impl ScoreRecord {
    pub fn total(&self) -> u64 {
        self.wins + self.ties + self.losses
    }

    /// Copeland score `wins + ties/2`.
    pub fn score(&self) -> Rational {
        ratio(2 * self.wins as i128 + self.ties as i128, 2)
    }

    /// `wins + alpha * ties`.
    pub fn alpha_score(&self, alpha: Rational) -> Rational {
        Rational::from_integer(self.wins as i128) + alpha * Rational::from_integer(self.ties as i128)
    }

    fn record(&mut self, delta: i64) {
        match delta.signum() {
            1 => self.wins += 1,
            0 => self.ties += 1,
            _ => self.losses += 1,
        }
    }
}

/// Whether marginal coordinates are exact fractions `n_e/μ` or sample
/// frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarginalMode {
    Exact,
    Estimated,
}

/// Coordinates of the uniform mixture of all matchings: for every edge the
/// fraction of matchings containing it, for every vertex the fraction
/// leaving it unmatched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformMarginals {
    /// `μ` in exact mode.
    pub mu: Option<u64>,
    /// Indexed like [`Instance::edges`].
    pub edge_coord: Vec<Rational>,
    pub loop_coord: Vec<Rational>,
    pub mode: MarginalMode,
}

impl UniformMarginals {
    /// Empirical frequencies over `samples`.
    pub fn from_samples(inst: &Instance, samples: &[Matching]) -> Result<Self, Error> {
        let counts: Vec<(Matching, u64)> = samples.iter().map(|m| (m.clone(), 1)).collect();
        Self::from_counts(inst, &counts)
    }

    /// Empirical frequencies from `(matching, multiplicity)` pairs.
    pub fn from_counts(inst: &Instance, counts: &[(Matching, u64)]) -> Result<Self, Error> {
        let total: u64 = counts.iter().map(|c| c.1).sum();
        if total == 0 {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "at least one sample is required",
            });
        }
        let mut edge_hits = vec![0u64; inst.num_edges()];
        let mut loop_hits = vec![0u64; inst.num_vertices()];
        for (m, c) in counts {
            let (e, l) = tally(inst, core::iter::once(m));
            for (acc, x) in edge_hits.iter_mut().zip(e) {
                *acc += x * c;
            }
            for (acc, x) in loop_hits.iter_mut().zip(l) {
                *acc += x * c;
            }
        }
        let total = total as i128;
        Ok(UniformMarginals {
            mu: None,
            edge_coord: edge_hits.iter().map(|&h| ratio(h as i128, total)).collect(),
            loop_coord: loop_hits.iter().map(|&h| ratio(h as i128, total)).collect(),
            mode: MarginalMode::Estimated,
        })
    }

    /// Per-vertex coordinates sum to one (always true for both modes when
    /// the marginals came from matchings of `inst`).
    pub fn is_simplex(&self, inst: &Instance) -> bool {
        let mut sums = self.loop_coord.clone();
        if sums.len() != inst.num_vertices() || self.edge_coord.len() != inst.num_edges() {
            return false;
        }
        for (&(u, v), q) in inst.edges().iter().zip(&self.edge_coord) {
            sums[u] += q;
            sums[v] += q;
        }
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        sums.iter().all(|s| *s == one)
            && self
                .edge_coord
                .iter()
                .chain(&self.loop_coord)
                .all(|q| *q >= zero && *q <= one)
    }
}

fn tally<'a>(inst: &Instance, matchings: impl Iterator<Item = &'a Matching>) -> (Vec<u64>, Vec<u64>) {
    let mut edge_hits = vec![0u64; inst.num_edges()];
    let mut loop_hits = vec![0u64; inst.num_vertices()];
    for m in matchings {
        for u in 0..inst.num_vertices() {
            match m.partner(u) {
                None => loop_hits[u] += 1,
                Some(v) if u < v => edge_hits[inst.edge_index(u, v).unwrap()] += 1,
                Some(_) => {}
            }
        }
    }
    (edge_hits, loop_hits)
}

/// Fully enumerated election over the matchings of one instance.
#[derive(Clone, Debug)]
pub struct Oracle<'a> {
    inst: &'a Instance,
    matchings: Vec<Matching>,
    profiles: Vec<Vec<u32>>,
}

impl<'a> Oracle<'a> {
    pub fn new(inst: &'a Instance, budget: u64) -> Result<Self, Error> {
        let mut matchings = Vec::new();
        let mut profiles = Vec::new();
        for_each_matching(inst, budget, |m| {
            profiles.push(rank_profile(inst, m));
            matchings.push(m.clone());
        })?;
        Ok(Oracle {
            inst,
            matchings,
            profiles,
        })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// Number of matchings `μ`.
    pub fn mu(&self) -> usize {
        self.matchings.len()
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn matching(&self, i: usize) -> &Matching {
        &self.matchings[i]
    }

    pub fn index_of(&self, m: &Matching) -> Option<usize> {
        self.matchings.iter().position(|x| x == m)
    }

    /// `Δ(M_i, M_j)`.
    pub fn delta(&self, i: usize, j: usize) -> i64 {
        compare_profiles(&self.profiles[i], &self.profiles[j]).delta
    }

    fn profile_of(&self, m: &Matching) -> Result<Vec<u32>, Error> {
        m.validate(self.inst)?;
        Ok(rank_profile(self.inst, m))
    }

    /// Record of `M_i` against every matching (row `i` of the averaging table).
    pub fn row(&self, i: usize) -> ScoreRecord {
        let mut rec = ScoreRecord::default();
        for p in &self.profiles {
            rec.record(compare_profiles(&self.profiles[i], p).delta);
        }
        rec
    }

    /// Record of an arbitrary matching of the instance.
    pub fn record_of(&self, m: &Matching) -> Result<ScoreRecord, Error> {
        let pm = self.profile_of(m)?;
        let mut rec = ScoreRecord::default();
        for p in &self.profiles {
            rec.record(compare_profiles(&pm, p).delta);
        }
        Ok(rec)
    }

    /// Records of all matchings, in enumeration order. Each unordered pair is
    /// compared once.
    pub fn score_table(&self) -> Vec<ScoreRecord> {
        let mu = self.mu();
        let mut table = vec![ScoreRecord::default(); mu];
        for i in 0..mu {
            table[i].ties += 1;
            for j in (i + 1)..mu {
                let d = self.delta(i, j);
                table[i].record(d);
                table[j].record(-d);
            }
        }
        table
    }

    /// Indices maximizing `wins + alpha * ties`, in enumeration order.
    pub fn copeland_winners(&self, table: &[ScoreRecord], alpha: Rational) -> Result<Vec<usize>, Error> {
        if alpha < Rational::from_integer(0) || alpha > Rational::from_integer(1) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "must lie in [0, 1]",
            });
        }
        Ok(argmax(table.iter().map(|r| r.alpha_score(alpha))))
    }

    /// Indices with Copeland score at least `μ/2`.
    pub fn weak_copeland_winners(&self, table: &[ScoreRecord]) -> Vec<usize> {
        let half = self.half_mu();
        (0..table.len()).filter(|&i| table[i].score() >= half).collect()
    }

    pub fn half_mu(&self) -> Rational {
        ratio(self.mu() as i128, 2)
    }

    /// `max_N Δ(N, m)`; zero exactly when `m` is popular.
    pub fn unpopularity_margin(&self, m: &Matching) -> Result<i64, Error> {
        let pm = self.profile_of(m)?;
        Ok(self
            .profiles
            .iter()
            .map(|p| compare_profiles(p, &pm).delta)
            .max()
            .unwrap_or(0))
    }

    pub fn is_popular(&self, m: &Matching) -> Result<bool, Error> {
        Ok(self.unpopularity_margin(m)? == 0)
    }

    /// Undefeated against at least half of all matchings.
    pub fn is_semi_popular(&self, m: &Matching) -> Result<bool, Error> {
        let pm = self.profile_of(m)?;
        let undefeated = self
            .profiles
            .iter()
            .filter(|p| compare_profiles(&pm, p).delta >= 0)
            .count();
        Ok(2 * undefeated >= self.mu())
    }

    /// Strictly beats every other matching.
    pub fn is_condorcet(&self, m: &Matching) -> Result<bool, Error> {
        let pm = self.profile_of(m)?;
        Ok(self
            .matchings
            .iter()
            .zip(&self.profiles)
            .all(|(n, p)| n == m || compare_profiles(&pm, p).delta > 0))
    }

    /// No matching makes some vertex better off and none worse off.
    pub fn is_pareto_optimal(&self, m: &Matching) -> Result<bool, Error> {
        let pm = self.profile_of(m)?;
        Ok(self.profiles.iter().all(|p| {
            let r = compare_profiles(p, &pm);
            !(r.votes_against == 0 && r.votes_for > 0)
        }))
    }

    /// `Σ_N Δ(m, N) / μ` computed directly.
    pub fn wt_score(&self, m: &Matching) -> Result<Rational, Error> {
        let pm = self.profile_of(m)?;
        let total: i64 = self.profiles.iter().map(|p| compare_profiles(&pm, p).delta).sum();
        Ok(ratio(total as i128, self.mu() as i128))
    }

    /// `Σ_N Δ(M_i, N) / μ` for every enumerated matching.
    pub fn wt_scores(&self) -> Vec<Rational> {
        let mu = self.mu();
        let mut sums = vec![0i64; mu];
        for i in 0..mu {
            for j in (i + 1)..mu {
                let d = self.delta(i, j);
                sums[i] += d;
                sums[j] -= d;
            }
        }
        sums.into_iter().map(|s| ratio(s as i128, mu as i128)).collect()
    }

    /// Exact coordinates `n_e/μ` and `ℓ_u/μ`.
    pub fn exact_marginals(&self) -> UniformMarginals {
        let (edge_hits, loop_hits) = tally(self.inst, self.matchings.iter());
        let mu = self.mu() as i128;
        UniformMarginals {
            mu: Some(self.mu() as u64),
            edge_coord: edge_hits.iter().map(|&h| ratio(h as i128, mu)).collect(),
            loop_coord: loop_hits.iter().map(|&h| ratio(h as i128, mu)).collect(),
            mode: MarginalMode::Exact,
        }
    }
}

/// Exact marginals without keeping the matchings around.
pub fn exact_marginals(inst: &Instance, budget: u64) -> Result<UniformMarginals, Error> {
    let mut edge_hits = vec![0u64; inst.num_edges()];
    let mut loop_hits = vec![0u64; inst.num_vertices()];
    let mu = for_each_matching(inst, budget, |m| {
        let (e, l) = tally(inst, core::iter::once(m));
        for (acc, x) in edge_hits.iter_mut().zip(e) {
            *acc += x;
        }
        for (acc, x) in loop_hits.iter_mut().zip(l) {
            *acc += x;
        }
    })?;
    let den = mu as i128;
    Ok(UniformMarginals {
        mu: Some(mu),
        edge_coord: edge_hits.iter().map(|&h| ratio(h as i128, den)).collect(),
        loop_coord: loop_hits.iter().map(|&h| ratio(h as i128, den)).collect(),
        mode: MarginalMode::Exact,
    })
}

fn argmax(values: impl Iterator<Item = Rational>) -> Vec<usize> {
    let values: Vec<Rational> = values.collect();
    match values.iter().max() {
        None => Vec::new(),
        Some(best) => (0..values.len()).filter(|&i| values[i] == *best).collect(),
    }
}
