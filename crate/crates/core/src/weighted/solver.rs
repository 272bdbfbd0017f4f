//! Exact maximum-weight perfect matching in the self-loop augmented graph.
//!
//! A perfect matching of the augmented graph is a matching `M` of the
//! instance plus a loop at every vertex `M` leaves free, so
//!
//! `weight(M̃) = Σ_u loop(u) + Σ_{(u,v)∈M} (w(u,v) − loop(u) − loop(v))`
//!
//! and the problem is ordinary maximum-weight matching under the shifted
//! edge weights. Optimal ties are broken towards fewer edges, then towards
//! the lexicographically least sorted edge list.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::blossom::max_weight_matching;
use super::EdgeWeights;
use crate::error::Error;
use crate::model::{Instance, Matching};
use crate::oracle::for_each_matching;
use crate::rational::{common_denominator, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverBackend {
    /// Blossom algorithm on scaled integer weights; polynomial.
    Blossom,
    /// Tries every matching; the reference oracle.
    Exhaustive { budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub matching: Matching,
    /// `weight(M̃)`.
    pub value: Rational,
}

/// Blossom backend.
pub fn max_weight_perfect_matching(inst: &Instance, w: &EdgeWeights) -> Result<Solution, Error> {
    max_weight_perfect_matching_with(inst, w, SolverBackend::Blossom)
}

pub fn max_weight_perfect_matching_with(
    inst: &Instance,
    w: &EdgeWeights,
    backend: SolverBackend,
) -> Result<Solution, Error> {
    w.check_shape(inst)?;
    let matching = match backend {
        SolverBackend::Blossom => by_blossom(inst, w),
        SolverBackend::Exhaustive { budget } => by_enumeration(inst, w, budget)?,
    };
    let value = w.weight_of(inst, &matching);
    Ok(Solution { matching, value })
}

fn by_enumeration(inst: &Instance, w: &EdgeWeights, budget: u64) -> Result<Matching, Error> {
    let mut best: Option<(Rational, Matching)> = None;
    for_each_matching(inst, budget, |m| {
        let value = w.weight_of(inst, m);
        let better = match &best {
            None => true,
            Some((bv, bm)) => match value.cmp(bv) {
                Ordering::Greater => true,
                Ordering::Equal => m.canonical_cmp(bm) == Ordering::Less,
                Ordering::Less => false,
            },
        };
        if better {
            best = Some((value, m.clone()));
        }
    })?;
    Ok(best.expect("the empty matching always exists").1)
}

fn by_blossom(inst: &Instance, w: &EdgeWeights) -> Matching {
    let n = inst.num_vertices();
    let shifted: Vec<Rational> = inst
        .edges()
        .iter()
        .zip(&w.edge_weight)
        .map(|(&(u, v), we)| we - w.loop_weight[u] - w.loop_weight[v])
        .collect();
    let scale = common_denominator(shifted.iter()) * (n as i128 + 1);
    // Multiplying by (n + 1) leaves room for a −1 per edge: at most n/2
    // edges are matched, so the perturbation only separates exact ties, in
    // favour of fewer edges.
    let candidates: Vec<(usize, usize, i128)> = inst
        .edges()
        .iter()
        .zip(&shifted)
        .map(|(&(u, v), s)| (u, v, (s * Rational::from_integer(scale)).to_integer() - 1))
        .filter(|e| e.2 > 0)
        .collect();

    let optimum = solve_with(n, &candidates, &[]);
    let mut forced: Vec<usize> = Vec::new();
    let mut used = alloc::vec![false; n];
    for (i, &(u, v, _)) in candidates.iter().enumerate() {
        if used[u] || used[v] {
            continue;
        }
        forced.push(i);
        if solve_with(n, &candidates, &forced) == optimum {
            used[u] = true;
            used[v] = true;
        } else {
            forced.pop();
        }
    }
    let mut m = Matching::empty(n);
    for i in forced {
        let (u, v, _) = candidates[i];
        m.link(u, v);
    }
    m
}

/// Best total with the edges `forced` (indices into `edges`) fixed.
fn solve_with(n: usize, edges: &[(usize, usize, i128)], forced: &[usize]) -> i128 {
    let mut blocked = alloc::vec![false; n];
    let mut total = 0;
    for &i in forced {
        let (u, v, w) = edges[i];
        blocked[u] = true;
        blocked[v] = true;
        total += w;
    }
    let rest: Vec<(usize, usize, i128)> = edges
        .iter()
        .copied()
        .filter(|&(u, v, _)| !blocked[u] && !blocked[v])
        .collect();
    let mate = max_weight_matching(n, &rest);
    total
        + rest
            .iter()
            .filter(|&&(u, v, _)| mate[u] == Some(v))
            .map(|e| e.2)
            .sum::<i128>()
}
