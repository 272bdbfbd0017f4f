//! Weighted Copeland winners and popularity certificates.
//!
//! Both questions reduce to a maximum-weight perfect matching in the graph
//! where every vertex also has a loop (the "stay unmatched" option):
//!
//! * under the weights built by [`build_wt_star`] from the uniform marginals,
//!   the weight of `M̃` is `Σ_N Δ(M, N) / μ`, the weighted Copeland score;
//! * under the weights built by [`build_popularity_weights`] for a matching
//!   `M`, the weight of `Ñ` is `Δ(N, M)`, so `M` is popular iff the optimum
//!   is zero. Vertex potentials `y` with `y_u + y_v ≥ wt(u,v)`,
//!   `y_u ≥ wt(u,u)` and `Σ y = 0` certify this (weak LP duality).

pub mod blossom;
mod solver;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Signed;

pub use solver::{max_weight_perfect_matching, max_weight_perfect_matching_with, Solution, SolverBackend};

use crate::election::vote;
use crate::error::Error;
use crate::model::{Instance, Matching, Vertex};
use crate::oracle::{exact_marginals, MarginalMode, UniformMarginals};
use crate::rational::{to_f64, Rational};
use crate::sampler::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Built from exact marginals.
    WtStarExact,
    /// Built from sample frequencies.
    WtStarEstimated,
    /// Popularity weights of a fixed matching.
    Popularity,
    /// Supplied by the caller.
    Custom,
}

/// A weight on every edge (indexed like [`Instance::edges`]) and on every
/// vertex's loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWeights {
    pub edge_weight: Vec<Rational>,
    pub loop_weight: Vec<Rational>,
    pub provenance: Provenance,
}

impl EdgeWeights {
    pub(crate) fn check_shape(&self, inst: &Instance) -> Result<(), Error> {
        if self.edge_weight.len() != inst.num_edges() {
            return Err(Error::MissingCoordinate { what: "edge weight" });
        }
        if self.loop_weight.len() != inst.num_vertices() {
            return Err(Error::MissingCoordinate { what: "loop weight" });
        }
        Ok(())
    }

    /// Weight of the perfect matching `M̃` of the augmented graph.
    pub fn weight_of(&self, inst: &Instance, m: &Matching) -> Rational {
        let mut total = Rational::from_integer(0);
        for u in 0..inst.num_vertices() {
            match m.partner(u) {
                None => total += self.loop_weight[u],
                Some(v) if u < v => total += self.edge_weight[inst.edge_index(u, v).unwrap()],
                Some(_) => {}
            }
        }
        total
    }
}

/// `wt*` from marginals `q`:
///
/// `wt*(u,v) = Σ_{v' below v for u} q(u,v') − Σ_{v' above v for u} q(u,v')`
/// `          + (the same from v's side)`, and `wt*(u,u) = q(u,u) − 1`,
///
/// where `u`'s options include its own loop, ranked last.
pub fn build_wt_star(inst: &Instance, q: &UniformMarginals) -> Result<EdgeWeights, Error> {
    if q.edge_coord.len() != inst.num_edges() {
        return Err(Error::MissingCoordinate { what: "edge marginal" });
    }
    if q.loop_coord.len() != inst.num_vertices() {
        return Err(Error::MissingCoordinate { what: "loop marginal" });
    }
    let zero = Rational::from_integer(0);
    // side[u][t] = vote-weighted mass for an option of u in tier t (1-based)
    let side: Vec<Vec<Rational>> = (0..inst.num_vertices())
        .map(|u| {
            let tiers = inst.tiers(u);
            let mass: Vec<Rational> = tiers
                .iter()
                .map(|group| {
                    group
                        .iter()
                        .map(|&v| q.edge_coord[inst.edge_index(u, v).unwrap()])
                        .sum::<Rational>()
                })
                .collect();
            let total: Rational = mass.iter().sum::<Rational>() + q.loop_coord[u];
            let mut above = zero;
            let mut out = vec![zero];
            for m in &mass {
                let below = total - above - m;
                out.push(below - above);
                above += m;
            }
            out
        })
        .collect();
    let edge_weight = inst
        .edges()
        .iter()
        .map(|&(u, v)| {
            side[u][inst.tier(u, v).unwrap() as usize] + side[v][inst.tier(v, u).unwrap() as usize]
        })
        .collect();
    let loop_weight = q.loop_coord.iter().map(|l| l - Rational::from_integer(1)).collect();
    Ok(EdgeWeights {
        edge_weight,
        loop_weight,
        provenance: match q.mode {
            MarginalMode::Exact => Provenance::WtStarExact,
            MarginalMode::Estimated => Provenance::WtStarEstimated,
        },
    })
}

/// `wt(u,v) = vote_u(v, M̃(u)) + vote_v(u, M̃(v))`; `wt(u,u)` is `0` when `u`
/// is unmatched in `m`, else `−1`.
pub fn build_popularity_weights(inst: &Instance, m: &Matching) -> Result<EdgeWeights, Error> {
    m.validate(inst)?;
    let edge_weight = inst
        .edges()
        .iter()
        .map(|&(u, v)| {
            let a = vote(inst, u, v, m.augmented_partner(u))?;
            let b = vote(inst, v, u, m.augmented_partner(v))?;
            Ok(Rational::from_integer(i128::from(a) + i128::from(b)))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let loop_weight = (0..inst.num_vertices())
        .map(|u| Rational::from_integer(if m.is_matched(u) { -1 } else { 0 }))
        .collect();
    Ok(EdgeWeights {
        edge_weight,
        loop_weight,
        provenance: Provenance::Popularity,
    })
}

/// Weighted Copeland score of `m` as the weight of `M̃` under exact `wt*`.
pub fn wt_score(inst: &Instance, m: &Matching, q: &UniformMarginals) -> Result<Rational, Error> {
    if q.mode != MarginalMode::Exact {
        return Err(Error::Precondition {
            reason: "wt-score needs exact marginals",
        });
    }
    m.validate(inst)?;
    Ok(build_wt_star(inst, q)?.weight_of(inst, m))
}

/// A weighted Copeland winner and its score, from exact marginals.
pub fn weighted_copeland_exact(
    inst: &Instance,
    budget: u64,
    backend: SolverBackend,
) -> Result<Solution, Error> {
    let q = exact_marginals(inst, budget)?;
    max_weight_perfect_matching_with(inst, &build_wt_star(inst, &q)?, backend)
}

/// `⌈64 n² ln(4(|E|+|V|) n) / ε²⌉` samples, enough for every estimated
/// coordinate to be within `ε/(16n)` with high probability.
pub fn default_num_samples(inst: &Instance, epsilon: Rational) -> Result<u64, Error> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: "must be positive",
        });
    }
    let n = inst.num_vertices() as f64;
    let size = (inst.num_edges() + inst.num_vertices()) as f64;
    if n == 0.0 {
        return Ok(1);
    }
    let eps = to_f64(&epsilon);
    let raw = 64.0 * n * n * libm::log((4.0 * size * n).max(1.0)) / (eps * eps);
    Ok((libm::ceil(raw) as u64).max(1))
}

/// Result of the sampling-based weighted Copeland procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxSolution {
    pub matching: Matching,
    /// Optimum under the estimated weights (not the true wt-score).
    pub estimated_value: Rational,
    pub num_samples: u64,
    pub marginals: UniformMarginals,
}

/// Estimates the marginals from `num_samples` draws of `sampler` (default
/// [`default_num_samples`]), builds `wt*` from the estimates and returns its
/// maximum-weight perfect matching.
pub fn weighted_copeland_apx(
    inst: &Instance,
    epsilon: Rational,
    sampler: &Sampler<'_>,
    seed: u64,
    num_samples: Option<u64>,
    backend: SolverBackend,
) -> Result<ApproxSolution, Error> {
    let default = default_num_samples(inst, epsilon)?;
    let num_samples = num_samples.unwrap_or(default);
    if num_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "num_samples",
            reason: "must be positive",
        });
    }
    let counts = sampler.histogram(seed, 0, num_samples as usize);
    let q = UniformMarginals::from_counts(inst, &counts)?;
    let solution = max_weight_perfect_matching_with(inst, &build_wt_star(inst, &q)?, backend)?;
    Ok(ApproxSolution {
        matching: solution.matching,
        estimated_value: solution.value,
        num_samples,
        marginals: q,
    })
}

/// Vertex potentials of a popularity certificate (odd-set values are zero
/// and not stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub y: Vec<i64>,
}

/// One violated dual constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Edge { u: Vertex, v: Vertex, slack: i64 },
    Loop { u: Vertex, slack: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    /// `y_u + y_v − wt(u,v)` per edge.
    pub edge_slack: Vec<i64>,
    /// `y_u − wt(u,u)` per vertex.
    pub loop_slack: Vec<i64>,
    /// `Σ_u y_u`.
    pub objective: i64,
    pub violations: Vec<Violation>,
}

impl DualReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    /// Feasible with objective zero: the matching is popular.
    pub fn certifies_popularity(&self) -> bool {
        self.feasible() && self.objective == 0
    }
}

/// Checks `cert` against the popularity weights of `m`.
pub fn verify_dual(inst: &Instance, m: &Matching, cert: &DualCertificate) -> Result<DualReport, Error> {
    if cert.y.len() != inst.num_vertices() {
        return Err(Error::CertificateIncomplete {
            expected: inst.num_vertices(),
            found: cert.y.len(),
        });
    }
    let w = build_popularity_weights(inst, m)?;
    let int = |r: &Rational| r.to_integer() as i64;
    let mut violations = Vec::new();
    let edge_slack: Vec<i64> = inst
        .edges()
        .iter()
        .zip(&w.edge_weight)
        .map(|(&(u, v), we)| {
            let slack = cert.y[u] + cert.y[v] - int(we);
            if slack < 0 {
                violations.push(Violation::Edge { u, v, slack });
            }
            slack
        })
        .collect();
    let loop_slack: Vec<i64> = (0..inst.num_vertices())
        .map(|u| {
            let slack = cert.y[u] - int(&w.loop_weight[u]);
            if slack < 0 {
                violations.push(Violation::Loop { u, slack });
            }
            slack
        })
        .collect();
    Ok(DualReport {
        edge_slack,
        loop_slack,
        objective: cert.y.iter().sum(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularityVerdict {
    pub popular: bool,
    /// `max_N Δ(N, m)`, the unpopularity margin.
    pub margin: Rational,
    /// A matching beating `m` by `margin` when `m` is not popular.
    pub witness: Option<Matching>,
}

/// Popularity of `m` through one maximum-weight perfect matching.
pub fn is_popular_via_solver(
    inst: &Instance,
    m: &Matching,
    backend: SolverBackend,
) -> Result<PopularityVerdict, Error> {
    let w = build_popularity_weights(inst, m)?;
    let sol = max_weight_perfect_matching_with(inst, &w, backend)?;
    let popular = !sol.value.is_positive();
    Ok(PopularityVerdict {
        popular,
        margin: sol.value,
        witness: (!popular).then_some(sol.matching),
    })
}

/// Convenience: `wt*` weights from exact marginals.
pub fn exact_wt_star(inst: &Instance, budget: u64) -> Result<EdgeWeights, Error> {
    build_wt_star(inst, &exact_marginals(inst, budget)?)
}
