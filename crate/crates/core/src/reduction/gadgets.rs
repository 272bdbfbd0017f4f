//! Gadget-level checks, all by exhaustive enumeration of small induced
//! subgraphs.
//!
//! * Edge gadget: `F_e` and `L_e` are each tied with exactly ten matchings
//!   of `Y_e` (themselves included), listed in [`expected_ties`], and
//!   defeated by none; every matching of `Y_e` is defeated or tied by at
//!   least ten.
//! * Vertex gadget: the red configuration ties with 2 matchings of `Z_i`,
//!   the blue one with 3, and neither is defeated, whatever `A` is.
//! * Two red gadgets around one edge: explicit witnesses, one per auxiliary
//!   vertex, that defeat or tie the current configuration on
//!   `Y_e ∪ Z_i ∪ Z_j` ([`verify_red_red_witnesses`]).

use alloc::vec;
use alloc::vec::Vec;

use super::{gadget_state, EdgeGadget, GadgetState, ReductionArtifacts, VertexGadget};
use crate::election::compare;
use crate::error::Error;
use crate::model::{Matching, Subinstance, Vertex};
use crate::oracle::{Oracle, DEFAULT_BUDGET};

/// Ties and defeats of one canonical matching inside its gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCheck {
    pub ties: u64,
    pub defeats: u64,
    /// The tied matchings are exactly the expected ones.
    pub tie_list_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGadgetCheck {
    pub edge: (usize, usize),
    pub mu: usize,
    pub f: CanonicalCheck,
    pub l: CanonicalCheck,
    /// Minimum over all matchings `N` of `Y_e` of the number of matchings
    /// that defeat or tie `N`.
    pub min_defeats_or_ties: u64,
}

impl EdgeGadgetCheck {
    pub fn holds(&self) -> bool {
        let ok = |c: &CanonicalCheck| c.ties == 10 && c.defeats == 0 && c.tie_list_matches;
        ok(&self.f) && ok(&self.l) && self.min_defeats_or_ties == 10
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGadgetCheck {
    pub vertex: usize,
    pub mu: usize,
    pub red_ties: u64,
    pub red_defeats: u64,
    pub blue_ties: u64,
    pub blue_defeats: u64,
}

impl VertexGadgetCheck {
    pub fn holds(&self) -> bool {
        self.red_ties == 2 && self.red_defeats == 0 && self.blue_ties == 3 && self.blue_defeats == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub aux: usize,
    pub edges: Vec<EdgeGadgetCheck>,
    pub vertices: Vec<VertexGadgetCheck>,
}

impl GadgetReport {
    pub fn all_hold(&self) -> bool {
        self.edges.iter().all(EdgeGadgetCheck::holds) && self.vertices.iter().all(VertexGadgetCheck::holds)
    }
}

/// The ten matchings of `Y_e` tied with `F_e`. Apply to
/// [`EdgeGadget::mirrored`] for the list of `L_e`.
pub fn expected_ties(g: &EdgeGadget) -> Vec<Vec<(Vertex, Vertex)>> {
    let fixed = [(g.c, g.d), (g.c_p, g.d_p)];
    let mut out: Vec<Vec<(Vertex, Vertex)>> = [
        vec![(g.s, g.t_pp), (g.s_p, g.t_p), (g.s_pp, g.t), (g.v, g.v_p), (g.w, g.w_p)],
        vec![(g.s, g.t_p), (g.s_p, g.t), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.w, g.w_p)],
        vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.w, g.w_p)],
        vec![(g.s, g.t_p), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.w, g.w_p)],
        vec![(g.s, g.t_p), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.t, g.w)],
        vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.v, g.v_p), (g.t, g.w)],
        vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.s, g.v), (g.w, g.w_p)],
        vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.s, g.v), (g.t, g.w)],
    ]
    .into_iter()
    .map(|mut list| {
        list.extend(fixed);
        list
    })
    .collect();
    out.push(vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.s, g.c), (g.v, g.v_p), (g.w, g.w_p), (g.c_p, g.d_p)]);
    out.push(vec![(g.s_p, g.t_p), (g.s_pp, g.t_pp), (g.s, g.c), (g.v, g.v_p), (g.t, g.w), (g.c_p, g.d_p)]);
    out
}

fn to_sub(sub: &Subinstance, pairs: &[(Vertex, Vertex)]) -> Matching {
    let mapped: Vec<(Vertex, Vertex)> = pairs
        .iter()
        .map(|&(u, v)| (sub.to_sub(u).unwrap(), sub.to_sub(v).unwrap()))
        .collect();
    Matching::from_pairs(&sub.instance, &mapped).expect("gadget pairs are edges of the gadget")
}

fn canonical_check(
    oracle: &Oracle<'_>,
    sub: &Subinstance,
    pairs: &[(Vertex, Vertex)],
    expected: Option<&[Vec<(Vertex, Vertex)>]>,
) -> CanonicalCheck {
    let target = to_sub(sub, pairs);
    let i = oracle.index_of(&target).expect("enumeration contains every matching");
    let mut ties = 0;
    let mut defeats = 0;
    let mut tied = Vec::new();
    for j in 0..oracle.mu() {
        match oracle.delta(j, i).signum() {
            0 => {
                ties += 1;
                tied.push(oracle.matching(j).clone());
            }
            1 => defeats += 1,
            _ => {}
        }
    }
    let tie_list_matches = match expected {
        None => true,
        Some(lists) => {
            let mut want: Vec<Matching> = lists.iter().map(|l| to_sub(sub, l)).collect();
            want.sort();
            tied.sort();
            want == tied
        }
    };
    CanonicalCheck {
        ties,
        defeats,
        tie_list_matches,
    }
}

fn check_edge_gadget(art: &ReductionArtifacts, idx: usize) -> Result<EdgeGadgetCheck, Error> {
    let g = &art.edge_gadgets[idx];
    let sub = art.instance.induced(&g.vertices());
    let oracle = Oracle::new(&sub.instance, DEFAULT_BUDGET)?;
    let f = canonical_check(&oracle, &sub, &g.f_matching(), Some(&expected_ties(g)));
    let l = canonical_check(&oracle, &sub, &g.l_matching(), Some(&expected_ties(&g.mirrored())));
    let min_defeats_or_ties = oracle
        .score_table()
        .iter()
        .map(|r| r.ties + r.losses)
        .min()
        .unwrap_or(0);
    Ok(EdgeGadgetCheck {
        edge: art.cover.edges()[idx],
        mu: oracle.mu(),
        f,
        l,
        min_defeats_or_ties,
    })
}

fn check_vertex_gadget(art: &ReductionArtifacts, idx: usize) -> Result<VertexGadgetCheck, Error> {
    let z: &VertexGadget = &art.vertex_gadgets[idx];
    let sub = art.instance.induced(&z.vertices());
    let oracle = Oracle::new(&sub.instance, DEFAULT_BUDGET)?;
    let red = canonical_check(&oracle, &sub, &[(z.a, z.b), (z.a_p, z.b_p)], None);
    let blue = canonical_check(&oracle, &sub, &[(z.a, z.b_p), (z.a_p, z.b)], None);
    Ok(VertexGadgetCheck {
        vertex: idx + 1,
        mu: oracle.mu(),
        red_ties: red.ties,
        red_defeats: red.defeats,
        blue_ties: blue.ties,
        blue_defeats: blue.defeats,
    })
}

/// Checks every gadget of `art` on its induced subgraph.
pub fn verify_gadgets(art: &ReductionArtifacts) -> Result<GadgetReport, Error> {
    Ok(GadgetReport {
        aux: art.aux,
        edges: (0..art.edge_gadgets.len())
            .map(|i| check_edge_gadget(art, i))
            .collect::<Result<_, _>>()?,
        vertices: (0..art.vertex_gadgets.len())
            .map(|i| check_vertex_gadget(art, i))
            .collect::<Result<_, _>>()?,
    })
}

/// How the witnesses for a red-red edge are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// `s_e` is matched to `c_e`: move `d_e` onto `b_i`.
    SMatchedToC,
    /// `s_e` and `t_e` both hold their first choices.
    TopChoices,
    /// Everything else.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub edge: (usize, usize),
    pub case: WitnessCase,
    /// Witnesses built on the `t_e` / `Z_j` side.
    pub mirrored: bool,
    /// `Δ(witness, m)` on `Y_e ∪ Z_i ∪ Z_j`, one per auxiliary vertex.
    pub deltas: Vec<i64>,
    pub confirmed: usize,
}

impl WitnessReport {
    pub fn all_confirmed(&self) -> bool {
        self.confirmed == self.deltas.len()
    }
}

/// Matching with every vertex gadget red plus the given pairs.
pub fn all_red_with(art: &ReductionArtifacts, extra: &[(Vertex, Vertex)]) -> Result<Matching, Error> {
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for z in &art.vertex_gadgets {
        pairs.extend([(z.a, z.b), (z.a_p, z.b_p)]);
    }
    pairs.extend_from_slice(extra);
    Matching::from_pairs(&art.instance, &pairs)
}

/// Builds one witness per auxiliary vertex for the edge gadget `edge_index`,
/// whose endpoint gadgets must both be red in `m`, and compares each with
/// `m` on the union of the three gadgets.
pub fn verify_red_red_witnesses(
    art: &ReductionArtifacts,
    edge_index: usize,
    m: &Matching,
) -> Result<WitnessReport, Error> {
    m.validate(&art.instance)?;
    let (i, j) = *art.cover.edges().get(edge_index).ok_or(Error::InvalidParameter {
        name: "edge_index",
        reason: "no such cover edge",
    })?;
    if gadget_state(art, m, i) != Some(GadgetState::Red) || gadget_state(art, m, j) != Some(GadgetState::Red) {
        return Err(Error::Precondition {
            reason: "both endpoint gadgets must be red",
        });
    }
    let base = art.edge_gadgets[edge_index];
    let (zi, zj) = (&art.vertex_gadgets[i - 1], &art.vertex_gadgets[j - 1]);

    let (case, mirrored) = if m.contains(base.s, base.c) {
        (WitnessCase::SMatchedToC, false)
    } else if m.contains(base.t, base.c_p) {
        (WitnessCase::SMatchedToC, true)
    } else if m.contains(base.s, base.t_p) && m.contains(base.s_pp, base.t) {
        (WitnessCase::TopChoices, false)
    } else {
        (WitnessCase::General, m.contains(base.s, base.t_p))
    };
    let (g, z) = if mirrored { (base.mirrored(), zj) } else { (base, zi) };

    let mut union: Vec<Vertex> = base.vertices().to_vec();
    union.extend(zi.vertices());
    union.extend(zj.vertices());
    let sub = art.instance.induced(&union);
    let restricted = sub.restrict(m);

    let mut deltas = Vec::with_capacity(z.aux.len());
    for &u in &z.aux {
        let mut n = m.clone();
        match case {
            WitnessCase::SMatchedToC => {}
            WitnessCase::TopChoices => {
                n.link(g.s_p, g.t_p);
                n.link(g.s_pp, g.t_pp);
                n.link(g.s, g.c);
            }
            WitnessCase::General => {
                let s_partner = m.partner(g.s);
                match m.partner(g.t) {
                    Some(x) if x == g.s_p => n.link(g.s_p, g.t_p),
                    Some(x) if x == g.s_pp => n.link(g.s_pp, g.t_pp),
                    Some(x) if x == g.w => n.link(g.t, g.w_p),
                    Some(x) if x == g.w_p => n.link(g.w, g.w_p),
                    None => n.link(g.t, g.w),
                    Some(_) => unreachable!("t_e's remaining partners are handled above"),
                }
                n.link(g.s, g.c);
                if s_partner == Some(g.v) || s_partner == Some(g.v_p) {
                    n.link(g.v, g.v_p);
                }
                if s_partner == Some(g.t_pp) && !n.is_matched(g.s_pp) {
                    n.link(g.s_pp, g.t_pp);
                }
            }
        }
        n.link(g.d, z.b);
        n.link(z.a, u);
        let delta = compare(&sub.instance, &sub.restrict(&n), &restricted)?.delta;
        deltas.push(delta);
    }
    Ok(WitnessReport {
        edge: (i, j),
        case,
        mirrored,
        confirmed: deltas.iter().filter(|&&d| d >= 0).count(),
        deltas,
    })
}
