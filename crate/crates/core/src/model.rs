//! Instances with weak rankings, matchings and their self-loop completion.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rational::Rational;

/// Index of a vertex inside an [`Instance`]; assigned in input order.
pub type Vertex = usize;

/// A roommates instance: a graph whose vertices weakly rank their neighbours.
///
/// Tiers are 1-based and contiguous per vertex (lower is better, equal tier is
/// a tie). The self option is implicit and sits strictly below every
/// neighbour, which is what [`Instance::rank`] reports for `x == u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    names: Vec<String>,
    tiers: Vec<Vec<Vec<Vertex>>>,
    adjacency: Vec<Vec<(Vertex, u32)>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Instance {
    /// The instance with no vertices.
    pub fn empty() -> Self {
        Instance {
            names: Vec::new(),
            tiers: Vec::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Builds an instance from per-vertex `(neighbour, tier)` lists.
    ///
    /// Tier values only need to be positive; they are normalized to
    /// `1..=T_u` preserving their relative order.
    pub fn new(names: Vec<String>, rankings: Vec<Vec<(Vertex, u32)>>) -> Result<Self, Error> {
        let n = names.len();
        if rankings.len() != n {
            return Err(Error::InvalidParameter {
                name: "rankings",
                reason: "one ranking per vertex is required",
            });
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateVertex { name: name.clone() });
            }
        }

        let mut adjacency: Vec<Vec<(Vertex, u32)>> = Vec::with_capacity(n);
        for (u, ranking) in rankings.into_iter().enumerate() {
            let mut list = Vec::with_capacity(ranking.len());
            for (v, tier) in ranking {
                if v >= n {
                    return Err(Error::UnknownVertex { name: format!("#{v}") });
                }
                if v == u {
                    return Err(Error::SelfRanking { vertex: names[u].clone() });
                }
                if tier == 0 {
                    return Err(Error::InvalidTier {
                        vertex: names[u].clone(),
                        neighbor: names[v].clone(),
                    });
                }
                list.push((v, tier));
            }
            list.sort_unstable();
            for pair in list.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(Error::DuplicateNeighbor {
                        vertex: names[u].clone(),
                        neighbor: names[pair[0].0].clone(),
                    });
                }
            }
            // normalize to consecutive tiers
            let mut distinct: Vec<u32> = list.iter().map(|&(_, t)| t).collect();
            distinct.sort_unstable();
            distinct.dedup();
            for entry in &mut list {
                entry.1 = distinct.binary_search(&entry.1).unwrap() as u32 + 1;
            }
            adjacency.push(list);
        }

        let mut edges = Vec::new();
        for u in 0..n {
            for &(v, _) in &adjacency[u] {
                if adjacency[v].binary_search_by_key(&u, |&(w, _)| w).is_err() {
                    return Err(Error::AsymmetricAcceptability {
                        u: names[u].clone(),
                        v: names[v].clone(),
                    });
                }
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();

        let tiers = adjacency
            .iter()
            .map(|list| {
                let count = list.iter().map(|&(_, t)| t).max().unwrap_or(0) as usize;
                let mut groups = vec![Vec::new(); count];
                for &(v, t) in list {
                    groups[t as usize - 1].push(v);
                }
                groups
            })
            .collect();

        Ok(Instance {
            names,
            tiers,
            adjacency,
            edges,
        })
    }

    /// Builds an instance from explicit tie groups, best group first.
    pub fn from_tiers(names: Vec<String>, tiers: Vec<Vec<Vec<Vertex>>>) -> Result<Self, Error> {
        let rankings = tiers
            .into_iter()
            .map(|groups| {
                groups
                    .into_iter()
                    .enumerate()
                    .flat_map(|(t, group)| group.into_iter().map(move |v| (v, t as u32 + 1)))
                    .collect()
            })
            .collect();
        Instance::new(names, rankings)
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn name(&self, u: Vertex) -> &str {
        &self.names[u]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.names.iter().position(|n| n == name)
    }

    /// Tie groups of `u`, best first.
    pub fn tiers(&self, u: Vertex) -> &[Vec<Vertex>] {
        &self.tiers[u]
    }

    pub fn num_tiers(&self, u: Vertex) -> u32 {
        self.tiers[u].len() as u32
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adjacency[u].len()
    }

    /// Neighbours of `u` in index order.
    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[u].iter().map(|&(v, _)| v)
    }

    /// Tier `u` assigns to neighbour `v`.
    pub fn tier(&self, u: Vertex, v: Vertex) -> Option<u32> {
        self.adjacency[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adjacency[u][i].1)
    }

    /// Rank of option `x` for `u`, where `x == u` is the self option ranked
    /// below every neighbour. `None` if `x` is not acceptable to `u`.
    pub fn rank(&self, u: Vertex, x: Vertex) -> Option<u32> {
        if x == u {
            Some(self.num_tiers(u) + 1)
        } else {
            self.tier(u, x)
        }
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.edge_index(u, v).is_some()
    }

    /// Vertices with an empty preference list.
    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        (0..self.num_vertices()).filter(|&u| self.degree(u) == 0).collect()
    }

    /// True when no vertex has two neighbours in the same tier.
    pub fn is_strict(&self) -> bool {
        self.tiers.iter().all(|groups| groups.iter().all(|g| g.len() == 1))
    }

    /// The subinstance induced on `vertices`, with every ranking restricted
    /// to neighbours inside the set (relative order preserved).
    pub fn induced(&self, vertices: &[Vertex]) -> Subinstance {
        let mut to_sub = vec![None; self.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            to_sub[v] = Some(i);
        }
        let names = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let rankings = vertices
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&(w, t)| to_sub[w].map(|sw| (sw, t)))
                    .collect()
            })
            .collect();
        let instance =
            Instance::new(names, rankings).expect("restriction of a valid instance is valid");
        Subinstance {
            instance,
            to_sub,
            to_parent: vertices.to_vec(),
        }
    }
}

/// An induced subinstance together with its vertex maps.
#[derive(Clone, Debug)]
pub struct Subinstance {
    pub instance: Instance,
    to_sub: Vec<Option<Vertex>>,
    to_parent: Vec<Vertex>,
}

impl Subinstance {
    pub fn to_sub(&self, v: Vertex) -> Option<Vertex> {
        self.to_sub[v]
    }

    pub fn to_parent(&self, v: Vertex) -> Vertex {
        self.to_parent[v]
    }

    /// Keeps the pairs of `m` with both endpoints inside the subinstance.
    pub fn restrict(&self, m: &Matching) -> Matching {
        let mut out = Matching::empty(self.instance.num_vertices());
        for (u, v) in m.pairs() {
            if let (Some(su), Some(sv)) = (self.to_sub[u], self.to_sub[v]) {
                out.link(su, sv);
            }
        }
        out
    }
}

/// A set of vertex-disjoint edges, stored as a mate array where an unmatched
/// vertex is its own mate (which is exactly the self-loop completion).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    mate: Vec<Vertex>,
}

impl Matching {
    pub fn empty(num_vertices: usize) -> Self {
        Matching {
            mate: (0..num_vertices).collect(),
        }
    }

    /// Builds a matching from explicit pairs and validates it against `inst`.
    pub fn from_pairs(inst: &Instance, pairs: &[(Vertex, Vertex)]) -> Result<Self, Error> {
        let mut m = Matching::empty(inst.num_vertices());
        for &(u, v) in pairs {
            if u >= inst.num_vertices() || v >= inst.num_vertices() {
                return Err(Error::InvalidMatching {
                    reason: "vertex out of range",
                });
            }
            if !inst.is_edge(u, v) {
                return Err(Error::InvalidMatching {
                    reason: "pair is not an edge of the instance",
                });
            }
            if m.is_matched(u) || m.is_matched(v) {
                return Err(Error::InvalidMatching {
                    reason: "pairs are not vertex-disjoint",
                });
            }
            m.link(u, v);
        }
        Ok(m)
    }

    pub fn num_vertices(&self) -> usize {
        self.mate.len()
    }

    pub fn partner(&self, u: Vertex) -> Option<Vertex> {
        let v = self.mate[u];
        (v != u).then_some(v)
    }

    /// Partner in the self-loop completion: `u` itself when unmatched.
    pub fn augmented_partner(&self, u: Vertex) -> Vertex {
        self.mate[u]
    }

    pub fn is_matched(&self, u: Vertex) -> bool {
        self.mate[u] != u
    }

    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.mate[u] == v
    }

    /// Pairs `(u, v)` with `u < v`, sorted.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(u, &v)| u < v)
            .map(|(u, &v)| (u, v))
            .collect()
    }

    pub fn num_pairs(&self) -> usize {
        self.mate.iter().enumerate().filter(|&(u, &v)| u < v).count()
    }

    pub fn is_empty(&self) -> bool {
        self.num_pairs() == 0
    }

    pub fn validate(&self, inst: &Instance) -> Result<(), Error> {
        if self.mate.len() != inst.num_vertices() {
            return Err(Error::InvalidMatching {
                reason: "vertex count differs from the instance",
            });
        }
        for (u, &v) in self.mate.iter().enumerate() {
            if v >= self.mate.len() || self.mate[v] != u {
                return Err(Error::InvalidMatching {
                    reason: "mate array is not symmetric",
                });
            }
            if u != v && !inst.is_edge(u, v) {
                return Err(Error::InvalidMatching {
                    reason: "pair is not an edge of the instance",
                });
            }
        }
        Ok(())
    }

    /// Matches `u` with `v`, first releasing any previous partners.
    pub(crate) fn link(&mut self, u: Vertex, v: Vertex) {
        self.unlink(u);
        self.unlink(v);
        self.mate[u] = v;
        self.mate[v] = u;
    }

    pub(crate) fn unlink(&mut self, u: Vertex) {
        let v = self.mate[u];
        self.mate[v] = v;
        self.mate[u] = u;
    }

    /// The self-loop completion `M ∪ {(u,u) : u unmatched}`.
    pub fn augmented(&self) -> AugmentedMatching {
        AugmentedMatching {
            pairs: self.pairs(),
            loops: (0..self.mate.len()).filter(|&u| self.mate[u] == u).collect(),
        }
    }

    /// Tie-break order: fewer pairs first, then the lexicographically smaller
    /// sorted pair list.
    pub fn canonical_cmp(&self, other: &Matching) -> Ordering {
        self.num_pairs()
            .cmp(&other.num_pairs())
            .then_with(|| self.pairs().cmp(&other.pairs()))
    }
}

/// Perfect matching of the self-loop augmented graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedMatching {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub loops: Vec<Vertex>,
}

impl AugmentedMatching {
    /// Every vertex `0..n` is covered by exactly one pair or loop.
    pub fn covers_exactly_once(&self, num_vertices: usize) -> bool {
        let mut hits = vec![0u32; num_vertices];
        for &(u, v) in &self.pairs {
            if u >= num_vertices || v >= num_vertices {
                return false;
            }
            hits[u] += 1;
            hits[v] += 1;
        }
        for &u in &self.loops {
            if u >= num_vertices {
                return false;
            }
            hits[u] += 1;
        }
        hits.iter().all(|&h| h == 1)
    }
}

/// Erdős–Rényi style instance with uniformly random tiers in `1..=max_tiers`.
///
/// Vertices are named `1..=n`. Deterministic in `seed`.
pub fn random_instance(
    n: usize,
    edge_probability: Rational,
    max_tiers: u32,
    seed: u64,
) -> Result<Instance, Error> {
    if edge_probability < Rational::from_integer(0) || edge_probability > Rational::from_integer(1) {
        return Err(Error::InvalidParameter {
            name: "edge_probability",
            reason: "must lie in [0, 1]",
        });
    }
    if max_tiers == 0 {
        return Err(Error::InvalidParameter {
            name: "max_tiers",
            reason: "must be positive",
        });
    }
    let numer = *edge_probability.numer();
    let denom = *edge_probability.denom();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rankings: Vec<Vec<(Vertex, u32)>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_range(0..denom) < numer {
                edges.push((u, v));
            }
        }
    }
    for &(u, v) in &edges {
        rankings[u].push((v, rng.random_range(1..=max_tiers)));
        rankings[v].push((u, rng.random_range(1..=max_tiers)));
    }
    let names = (1..=n).map(|i| i.to_string()).collect();
    Instance::new(names, rankings)
}
