//! Shared fixtures and an independent brute-force reference.
#![allow(dead_code)]

use popmatch_core::reduction::gadgets::WitnessCase;
use popmatch_core::reduction::{CoverInstance, EdgeGadget, ReductionArtifacts};
use popmatch_core::{Instance, Matching, Rational, Vertex};

fn build(names: &[&str], lists: &[&[&[&str]]]) -> Instance {
    let index = |n: &str| names.iter().position(|x| *x == n).unwrap();
    let tiers = lists
        .iter()
        .map(|groups| groups.iter().map(|g| g.iter().map(|n| index(n)).collect()).collect())
        .collect();
    Instance::from_tiers(names.iter().map(|s| s.to_string()).collect(), tiers).unwrap()
}

/// Four agents, two popular matchings, no stable matching.
pub fn four_agents() -> Instance {
    build(
        &["a", "b", "c", "d"],
        &[
            &[&["b"], &["c"], &["d"]],
            &[&["c"], &["a"], &["d"]],
            &[&["a"], &["b"], &["d"]],
            &[&["a"], &["b"], &["c"]],
        ],
    )
}

/// Three agents with cyclic preferences, no popular matching.
pub fn cyclic_triangle() -> Instance {
    build(&["1", "2", "3"], &[&[&["2"], &["3"]], &[&["3"], &["1"]], &[&["1"], &["2"]]])
}

/// K_{3,3}: odd vertices rank 6 > 4 > 2, even vertices are indifferent.
pub fn indifferent_k33() -> Instance {
    let odd: &[&[&str]] = &[&["6"], &["4"], &["2"]];
    let even: &[&[&str]] = &[&["1", "3", "5"]];
    build(&["1", "2", "3", "4", "5", "6"], &[odd, even, odd, even, odd, even])
}

pub fn single_edge() -> Instance {
    build(&["u", "v"], &[&[&["v"]], &[&["u"]]])
}

pub fn edgeless(n: usize) -> Instance {
    Instance::new((1..=n).map(|i| i.to_string()).collect(), vec![Vec::new(); n]).unwrap()
}

pub fn named(inst: &Instance, pairs: &[(&str, &str)]) -> Matching {
    let pairs: Vec<(Vertex, Vertex)> = pairs
        .iter()
        .map(|(u, v)| (inst.vertex(u).unwrap(), inst.vertex(v).unwrap()))
        .collect();
    Matching::from_pairs(inst, &pairs).unwrap()
}

/// All matchings as sorted pair lists, by recursion on the lowest
/// undecided vertex (independent of the library's edge-order enumeration).
pub fn brute_matchings(inst: &Instance) -> Vec<Vec<(Vertex, Vertex)>> {
    fn go(inst: &Instance, used: &mut Vec<bool>, cur: &mut Vec<(Vertex, Vertex)>, out: &mut Vec<Vec<(Vertex, Vertex)>>) {
        let Some(u) = (0..inst.num_vertices()).find(|&u| !used[u]) else {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        };
        used[u] = true;
        go(inst, used, cur, out);
        for v in inst.neighbors(u).collect::<Vec<_>>() {
            if !used[v] {
                used[v] = true;
                cur.push((u.min(v), u.max(v)));
                go(inst, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
        used[u] = false;
    }
    let mut out = Vec::new();
    go(inst, &mut vec![false; inst.num_vertices()], &mut Vec::new(), &mut out);
    out
}

fn partner(pairs: &[(Vertex, Vertex)], u: Vertex) -> Vertex {
    pairs
        .iter()
        .find_map(|&(a, b)| if a == u { Some(b) } else if b == u { Some(a) } else { None })
        .unwrap_or(u)
}

/// Position of `x` in `u`'s list, self option last.
fn position(inst: &Instance, u: Vertex, x: Vertex) -> usize {
    if x == u {
        return inst.tiers(u).len() + 1;
    }
    inst.tiers(u).iter().position(|g| g.contains(&x)).unwrap() + 1
}

/// `Δ(M, N)` from scratch.
pub fn brute_delta(inst: &Instance, m: &[(Vertex, Vertex)], n: &[(Vertex, Vertex)]) -> i64 {
    (0..inst.num_vertices())
        .map(|u| {
            let (pm, pn) = (position(inst, u, partner(m, u)), position(inst, u, partner(n, u)));
            (pn as i64 - pm as i64).signum()
        })
        .sum()
}

/// Copeland score `wins + ties/2` from scratch.
pub fn brute_score(inst: &Instance, all: &[Vec<(Vertex, Vertex)>], m: &[(Vertex, Vertex)]) -> Rational {
    let twice: i128 = all
        .iter()
        .map(|n| match brute_delta(inst, m, n).signum() {
            1 => 2,
            0 => 1,
            _ => 0,
        })
        .sum();
    Rational::new(twice, 2)
}

pub fn to_matching(inst: &Instance, pairs: &[(Vertex, Vertex)]) -> Matching {
    Matching::from_pairs(inst, pairs).unwrap()
}

/// Every simple graph on `1..=n`.
pub fn all_graphs(n: usize) -> Vec<CoverInstance> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            CoverInstance::new(n, &edges).unwrap()
        })
        .collect()
}

/// Blue sets (1-based) that cover every edge.
pub fn covers(h: &CoverInstance) -> Vec<Vec<usize>> {
    let n = h.num_vertices();
    (0u32..1 << n)
        .map(|mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(|blue| {
            let flags: Vec<bool> = (1..=n).map(|i| blue.contains(&i)).collect();
            h.is_cover(&flags)
        })
        .collect()
}

fn pairs_of(g: &EdgeGadget, roles: &[(fn(&EdgeGadget) -> Vertex, fn(&EdgeGadget) -> Vertex)]) -> Vec<(Vertex, Vertex)> {
    roles.iter().map(|(a, b)| (a(g), b(g))).collect()
}

/// Red-red configurations of `Y_e`, one or more per witness case.
pub fn red_red_configurations(art: &ReductionArtifacts) -> Vec<(Vec<(Vertex, Vertex)>, WitnessCase, bool)> {
    let g = art.edge_gadgets[0];
    let mg = g.mirrored();
    let s_to_c = |g: &EdgeGadget| {
        pairs_of(
            g,
            &[
                (|g| g.s_p, |g| g.t_p),
                (|g| g.s_pp, |g| g.t_pp),
                (|g| g.s, |g| g.c),
                (|g| g.v, |g| g.v_p),
                (|g| g.w, |g| g.w_p),
                (|g| g.c_p, |g| g.d_p),
            ],
        )
    };
    let both_gadgets = |g: &EdgeGadget, extra: &[(Vertex, Vertex)]| {
        let mut out = extra.to_vec();
        out.extend([(g.c, g.d), (g.c_p, g.d_p)]);
        out
    };
    vec![
        (s_to_c(&g), WitnessCase::SMatchedToC, false),
        (s_to_c(&mg), WitnessCase::SMatchedToC, true),
        (
            both_gadgets(&g, &[(g.s, g.t_p), (g.s_pp, g.t), (g.v, g.v_p), (g.w, g.w_p)]),
            WitnessCase::TopChoices,
            false,
        ),
        (g.f_matching().to_vec(), WitnessCase::General, false),
        (g.l_matching().to_vec(), WitnessCase::General, true),
        (
            both_gadgets(&g, &[(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.w, g.w_p)]),
            WitnessCase::General,
            false,
        ),
        (
            both_gadgets(&g, &[(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.s, g.v), (g.w, g.w_p)]),
            WitnessCase::General,
            false,
        ),
        (
            both_gadgets(&g, &[(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.t, g.w), (g.v, g.v_p)]),
            WitnessCase::General,
            false,
        ),
        (
            both_gadgets(&g, &[(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.t, g.w_p), (g.v, g.v_p)]),
            WitnessCase::General,
            false,
        ),
        (
            both_gadgets(&g, &[(g.s, g.v_p), (g.s_p, g.t), (g.s_pp, g.t_pp)]),
            WitnessCase::General,
            false,
        ),
    ]
}
