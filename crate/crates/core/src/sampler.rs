//! Near-uniform sampling of matchings.
//!
//! The chain: with probability `laziness` stay put, otherwise pick an edge
//! `(u, v)` uniformly at random and
//! * remove it if it is in the matching,
//! * add it if both endpoints are free,
//! * slide if exactly one endpoint is matched (`(u, w)` becomes `(u, v)`),
//! * do nothing if both endpoints are matched elsewhere.
//!
//! Every move is reversible with the same probability, so the chain is
//! symmetric and its stationary distribution is uniform. No mixing-time
//! bound is claimed; [`tv_diagnostic`] measures closeness empirically.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{Instance, Matching};
use crate::oracle::enumerate_matchings;
use crate::rational::{ratio, to_f64, Rational};

/// Multiplier in the default step count `C·|E|·|V|·ln(1/δ)`.
pub const STEP_CONSTANT: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub steps: u64,
    pub seed: u64,
    pub laziness: Rational,
}

impl SamplerConfig {
    pub fn new(steps: u64, seed: u64) -> Self {
        SamplerConfig {
            steps,
            seed,
            laziness: ratio(1, 2),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                reason: "must be at least 1",
            });
        }
        validate_laziness(self.laziness)
    }
}

fn validate_laziness(laziness: Rational) -> Result<(), Error> {
    if laziness <= Rational::from_integer(0) || laziness >= Rational::from_integer(1) {
        return Err(Error::InvalidParameter {
            name: "laziness",
            reason: "must lie strictly between 0 and 1",
        });
    }
    Ok(())
}

/// `⌈10·|E|·|V|·ln(1/δ)⌉`, at least 1.
pub fn default_steps(inst: &Instance, delta: Rational) -> Result<u64, Error> {
    if !delta.is_positive() || delta >= Rational::from_integer(1) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: "must lie strictly between 0 and 1",
        });
    }
    let raw = (STEP_CONSTANT * inst.num_edges() as u64 * inst.num_vertices() as u64) as f64
        * libm::log(1.0 / to_f64(&delta));
    Ok((libm::ceil(raw) as u64).max(1))
}

/// The deterministic part of a step once edge `e` has been drawn.
pub fn apply_edge_move(inst: &Instance, m: &mut Matching, e: usize) {
    let (u, v) = inst.edges()[e];
    if m.contains(u, v) {
        m.unlink(u);
        return;
    }
    match (m.is_matched(u), m.is_matched(v)) {
        (false, false) | (true, false) | (false, true) => m.link(u, v),
        (true, true) => {}
    }
}

fn bernoulli<R: Rng>(rng: &mut R, p: Rational) -> bool {
    rng.random_range(0..*p.denom()) < *p.numer()
}

/// One lazy step of the chain, in place.
pub fn chain_step<R: Rng>(inst: &Instance, m: &mut Matching, laziness: Rational, rng: &mut R) {
    if inst.num_edges() == 0 || bernoulli(rng, laziness) {
        return;
    }
    let e = rng.random_range(0..inst.num_edges());
    apply_edge_move(inst, m, e);
}

/// Random source of sample `index` under `seed`; independent of how samples
/// are grouped into batches.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `cfg.steps` steps from the empty matching.
pub fn sample_matching(inst: &Instance, cfg: &SamplerConfig) -> Result<Matching, Error> {
    cfg.validate()?;
    Ok(run_chain(inst, cfg.steps, cfg.laziness, &mut ChaCha8Rng::seed_from_u64(cfg.seed)))
}

fn run_chain<R: Rng>(inst: &Instance, steps: u64, laziness: Rational, rng: &mut R) -> Matching {
    let mut m = Matching::empty(inst.num_vertices());
    for _ in 0..steps {
        chain_step(inst, &mut m, laziness, rng);
    }
    m
}

/// How samples are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// The lazy chain, `steps` steps per sample.
    Mcmc { steps: u64, laziness: Rational },
    /// Uniform draws from the enumerated list of matchings.
    ExactUniform,
}

/// A ready-to-use sampler for one instance.
#[derive(Clone, Debug)]
pub struct Sampler<'a> {
    inst: &'a Instance,
    backend: Backend,
    universe: Vec<Matching>,
}

impl<'a> Sampler<'a> {
    /// The exact-uniform backend enumerates all matchings up front, within
    /// `budget`.
    pub fn new(inst: &'a Instance, backend: Backend, budget: u64) -> Result<Self, Error> {
        let universe = match backend {
            Backend::Mcmc { steps, laziness } => {
                SamplerConfig { steps, seed: 0, laziness }.validate()?;
                Vec::new()
            }
            Backend::ExactUniform => enumerate_matchings(inst, budget)?,
        };
        Ok(Sampler {
            inst,
            backend,
            universe,
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Samples `first..first + count` under `seed`.
    ///
    /// Chain samples each use their own stream (`stream = index`); exact
    /// draws share the stream `first`, so a batch is reproducible as a unit.
    pub fn batch(&self, seed: u64, first: u64, count: usize) -> Vec<Matching> {
        match self.backend {
            Backend::Mcmc { steps, laziness } => (0..count as u64)
                .map(|i| run_chain(self.inst, steps, laziness, &mut stream_rng(seed, first + i)))
                .collect(),
            Backend::ExactUniform => {
                let mut rng = stream_rng(seed, first);
                (0..count)
                    .map(|_| self.universe[rng.random_range(0..self.universe.len())].clone())
                    .collect()
            }
        }
    }
}

impl Sampler<'_> {
    /// Like [`Sampler::batch`] but only keeps multiplicities, in first-seen
    /// order for the chain and enumeration order for exact draws.
    pub fn histogram(&self, seed: u64, first: u64, count: usize) -> Vec<(Matching, u64)> {
        match self.backend {
            Backend::Mcmc { .. } => {
                let mut order: Vec<(Matching, u64)> = Vec::new();
                let mut index: BTreeMap<Matching, usize> = BTreeMap::new();
                for m in self.batch(seed, first, count) {
                    match index.get(&m) {
                        Some(&i) => order[i].1 += 1,
                        None => {
                            index.insert(m.clone(), order.len());
                            order.push((m, 1));
                        }
                    }
                }
                order
            }
            Backend::ExactUniform => {
                let mut rng = stream_rng(seed, first);
                let mut hits = vec![0u64; self.universe.len()];
                for _ in 0..count {
                    hits[rng.random_range(0..self.universe.len())] += 1;
                }
                self.universe
                    .iter()
                    .zip(hits)
                    .filter(|&(_, h)| h > 0)
                    .map(|(m, h)| (m.clone(), h))
                    .collect()
            }
        }
    }
}

/// One-step transition probabilities between the given matchings (which
/// must be all matchings of `inst`).
pub fn transition_matrix(
    inst: &Instance,
    matchings: &[Matching],
    laziness: Rational,
) -> Result<Vec<Vec<Rational>>, Error> {
    validate_laziness(laziness)?;
    let index: BTreeMap<&Matching, usize> = matchings.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mu = matchings.len();
    let mut p = vec![vec![Rational::from_integer(0); mu]; mu];
    let edges = inst.num_edges();
    for (i, m) in matchings.iter().enumerate() {
        if edges == 0 {
            p[i][i] = Rational::from_integer(1);
            continue;
        }
        p[i][i] += laziness;
        let per_edge = (Rational::from_integer(1) - laziness) / Rational::from_integer(edges as i128);
        for e in 0..edges {
            let mut next = m.clone();
            apply_edge_move(inst, &mut next, e);
            let j = *index.get(&next).ok_or(Error::Precondition {
                reason: "transition leaves the supplied set of matchings",
            })?;
            p[i][j] += per_edge;
        }
    }
    Ok(p)
}

/// Structural facts about a transition matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StationarityReport {
    pub rows_stochastic: bool,
    pub symmetric: bool,
    pub uniform_stationary: bool,
    pub positive_diagonal: bool,
}

impl StationarityReport {
    pub fn all_hold(&self) -> bool {
        self.rows_stochastic && self.symmetric && self.uniform_stationary && self.positive_diagonal
    }
}

pub fn check_stationarity(p: &[Vec<Rational>]) -> StationarityReport {
    let n = p.len();
    let one = Rational::from_integer(1);
    let rows_stochastic = p.iter().all(|row| row.iter().sum::<Rational>() == one);
    let symmetric = (0..n).all(|i| (0..n).all(|j| p[i][j] == p[j][i]));
    // uniform · P = uniform  <=>  every column sums to one
    let uniform_stationary = (0..n).all(|j| (0..n).map(|i| p[i][j]).sum::<Rational>() == one);
    let positive_diagonal = (0..n).all(|i| p[i][i].is_positive());
    StationarityReport {
        rows_stochastic,
        symmetric,
        uniform_stationary,
        positive_diagonal,
    }
}

/// Empirical total-variation distance between `num_samples` chain samples
/// (sample `i` on stream `i`) and the uniform distribution.
pub fn tv_diagnostic(
    inst: &Instance,
    cfg: &SamplerConfig,
    num_samples: u64,
    budget: u64,
) -> Result<Rational, Error> {
    cfg.validate()?;
    if num_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "num_samples",
            reason: "must be positive",
        });
    }
    let universe = enumerate_matchings(inst, budget)?;
    let mut counts: BTreeMap<Matching, u64> = universe.into_iter().map(|m| (m, 0)).collect();
    for i in 0..num_samples {
        let m = run_chain(inst, cfg.steps, cfg.laziness, &mut stream_rng(cfg.seed, i));
        *counts.get_mut(&m).expect("chain stays inside the matchings") += 1;
    }
    Ok(total_variation(counts.values().copied(), num_samples))
}

/// `½ Σ |c_i/N − 1/μ|` over all `μ` outcomes with counts `c_i`.
pub fn total_variation(counts: impl IntoIterator<Item = u64>, num_samples: u64) -> Rational {
    let counts: Vec<u64> = counts.into_iter().collect();
    let mu = counts.len() as i128;
    let n = num_samples as i128;
    // work over the common denominator N·μ
    let sum: i128 = counts.iter().map(|&c| (c as i128 * mu - n).abs()).sum();
    ratio(sum, 2 * n * mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(n: usize) -> Vec<alloc::string::String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn triangle() -> Instance {
        Instance::new(
            names(3),
            vec![vec![(1, 1), (2, 2)], vec![(2, 1), (0, 2)], vec![(0, 1), (1, 2)]],
        )
        .unwrap()
    }

    #[test]
    fn moves_add_remove_slide() {
        let inst = triangle();
        let mut m = Matching::empty(3);
        apply_edge_move(&inst, &mut m, 0);
        assert_eq!(m.pairs(), vec![(0, 1)]);
        // edge (1,2): 1 matched to 0, 2 free -> slide
        apply_edge_move(&inst, &mut m, 2);
        assert_eq!(m.pairs(), vec![(1, 2)]);
        apply_edge_move(&inst, &mut m, 2);
        assert!(m.is_empty());
    }

    #[test]
    fn both_endpoints_matched_elsewhere_is_a_no_op() {
        // path 0-1-2-3, matching {01, 23}, draw edge (1,2)
        let inst = Instance::new(
            names(4),
            vec![vec![(1, 1)], vec![(0, 1), (2, 1)], vec![(1, 1), (3, 1)], vec![(2, 1)]],
        )
        .unwrap();
        let mut m = Matching::from_pairs(&inst, &[(0, 1), (2, 3)]).unwrap();
        let before = m.clone();
        apply_edge_move(&inst, &mut m, inst.edge_index(1, 2).unwrap());
        assert_eq!(m, before);
    }

    #[test]
    fn single_edge_one_step_is_exactly_uniform() {
        let inst = Instance::new(names(2), vec![vec![(1, 1)], vec![(0, 1)]]).unwrap();
        let all = enumerate_matchings(&inst, 100).unwrap();
        let p = transition_matrix(&inst, &all, ratio(1, 2)).unwrap();
        assert_eq!(p[0], vec![ratio(1, 2), ratio(1, 2)]);
        assert!(check_stationarity(&p).all_hold());
    }

    #[test]
    fn triangle_chain_is_symmetric() {
        let inst = triangle();
        let all = enumerate_matchings(&inst, 100).unwrap();
        let p = transition_matrix(&inst, &all, ratio(1, 2)).unwrap();
        assert!(check_stationarity(&p).all_hold());
        assert!(transition_matrix(&inst, &all, ratio(1, 1)).is_err());
    }

    #[test]
    fn edgeless_sampling_and_diagnostic() {
        let inst = Instance::new(names(3), vec![vec![], vec![], vec![]]).unwrap();
        let cfg = SamplerConfig::new(5, 1);
        assert!(sample_matching(&inst, &cfg).unwrap().is_empty());
        assert_eq!(tv_diagnostic(&inst, &cfg, 10, 100).unwrap(), ratio(0, 1));
        assert_eq!(default_steps(&inst, ratio(1, 100)).unwrap(), 1);
    }

    #[test]
    fn total_variation_arithmetic() {
        assert_eq!(total_variation([5, 5], 10), ratio(0, 1));
        assert_eq!(total_variation([10, 0], 10), ratio(1, 2));
        assert_eq!(total_variation([3, 1, 0, 0], 4), ratio(1, 2));
    }

    #[test]
    fn batches_do_not_depend_on_grouping() {
        let inst = triangle();
        let s = Sampler::new(&inst, Backend::Mcmc { steps: 20, laziness: ratio(1, 2) }, 100).unwrap();
        let whole = s.batch(9, 0, 6);
        let mut split = s.batch(9, 0, 2);
        split.extend(s.batch(9, 2, 4));
        assert_eq!(whole, split);
    }

    #[test]
    fn invalid_configs() {
        let inst = triangle();
        assert!(SamplerConfig::new(0, 1).validate().is_err());
        assert!(default_steps(&inst, ratio(0, 1)).is_err());
        assert!(Sampler::new(&inst, Backend::Mcmc { steps: 0, laziness: ratio(1, 2) }, 10).is_err());
    }
}
