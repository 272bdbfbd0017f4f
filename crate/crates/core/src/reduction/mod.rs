//! VERTEX COVER to Copeland-winner reduction.
//!
//! Every vertex `i` of the cover instance `H` becomes a vertex gadget `Z_i`
//! on `a_i, b_i, a'_i, b'_i` plus `A` auxiliary vertices `u_i^k`; every edge
//! `e = (i, j)`, `i < j`, becomes a 14-vertex edge gadget `Y_e`. Gadgets are
//! joined only by the inter-gadget edges `(b_i, d_e)` and `(b_j, d'_e)`.
//!
//! A vertex gadget is *red* when it holds `(a_i,b_i), (a'_i,b'_i)` and
//! *blue* when it holds `(a_i,b'_i), (a'_i,b_i)`; blue gadgets are the
//! cover. Whole reduced instances are far too large to enumerate, so the
//! claims about them are checked gadget by gadget ([`gadgets`]) and through
//! dual certificates ([`build_dual_certificate`]).

pub mod gadgets;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::model::{Instance, Matching, Vertex};
use crate::weighted::DualCertificate;

/// Auxiliary vertices per vertex gadget unless configured otherwise.
pub const DEFAULT_AUX: usize = 100;

/// A VERTEX COVER instance on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl CoverInstance {
    /// Edges may be given in either orientation; they are stored as `(i, j)`
    /// with `i < j`, sorted.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut out = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidCover {
                    reason: "edge endpoint outside 1..=n",
                });
            }
            if i == j {
                return Err(Error::InvalidCover { reason: "self-loop" });
            }
            out.push((i.min(j), i.max(j)));
        }
        out.sort_unstable();
        if out.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCover {
                reason: "duplicate edge",
            });
        }
        Ok(CoverInstance { n, edges: out })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether `set` (1-based vertex flags, index `i - 1`) touches every edge.
    pub fn is_cover(&self, in_set: &[bool]) -> bool {
        self.edges.iter().all(|&(i, j)| in_set[i - 1] || in_set[j - 1])
    }
}

/// Vertices of `Z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGadget {
    pub a: Vertex,
    pub b: Vertex,
    pub a_p: Vertex,
    pub b_p: Vertex,
    pub aux: Vec<Vertex>,
}

impl VertexGadget {
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = vec![self.a, self.b, self.a_p, self.b_p];
        out.extend(&self.aux);
        out
    }
}

/// Vertices of `Y_e`; `_p` is one prime, `_pp` two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeGadget {
    pub s: Vertex,
    pub t: Vertex,
    pub s_p: Vertex,
    pub t_p: Vertex,
    pub s_pp: Vertex,
    pub t_pp: Vertex,
    pub v: Vertex,
    pub v_p: Vertex,
    pub w: Vertex,
    pub w_p: Vertex,
    pub c: Vertex,
    pub d: Vertex,
    pub c_p: Vertex,
    pub d_p: Vertex,
}

impl EdgeGadget {
    pub fn vertices(&self) -> [Vertex; 14] {
        [
            self.s, self.t, self.s_p, self.t_p, self.s_pp, self.t_pp, self.v, self.v_p, self.w, self.w_p, self.c,
            self.d, self.c_p, self.d_p,
        ]
    }

    /// `F_e`, used when the lower endpoint's gadget is blue.
    pub fn f_matching(&self) -> [(Vertex, Vertex); 7] {
        [
            (self.s, self.t_pp),
            (self.s_p, self.t_p),
            (self.s_pp, self.t),
            (self.v, self.v_p),
            (self.w, self.w_p),
            (self.c, self.d),
            (self.c_p, self.d_p),
        ]
    }

    /// `L_e`, used otherwise.
    pub fn l_matching(&self) -> [(Vertex, Vertex); 7] {
        [
            (self.s, self.t_p),
            (self.s_p, self.t),
            (self.s_pp, self.t_pp),
            (self.v, self.v_p),
            (self.w, self.w_p),
            (self.c, self.d),
            (self.c_p, self.d_p),
        ]
    }

    /// The left-right symmetry of the gadget, which maps `F_e` onto `L_e`.
    pub fn mirrored(&self) -> EdgeGadget {
        EdgeGadget {
            s: self.t,
            t: self.s,
            s_p: self.t_pp,
            t_pp: self.s_p,
            t_p: self.s_pp,
            s_pp: self.t_p,
            v: self.w,
            v_p: self.w_p,
            w: self.v,
            w_p: self.v_p,
            c: self.c_p,
            d: self.d_p,
            c_p: self.c,
            d_p: self.d,
        }
    }
}

/// The reduced instance and everything needed to interpret it.
#[derive(Clone, Debug)]
pub struct ReductionArtifacts {
    pub cover: CoverInstance,
    pub aux: usize,
    pub instance: Instance,
    /// `vertex_gadgets[i - 1]` is `Z_i`.
    pub vertex_gadgets: Vec<VertexGadget>,
    /// Parallel to `cover.edges()`.
    pub edge_gadgets: Vec<EdgeGadget>,
    /// `(b_i, d_e)` and `(b_j, d'_e)` for every `e = (i, j)`.
    pub inter_gadget_edges: Vec<(Vertex, Vertex)>,
}

/// Builds the reduced roommates instance with `aux` auxiliary vertices per
/// vertex gadget. `|V| = n(4 + aux) + 14m`.
pub fn build_reduction(cover: &CoverInstance, aux: usize) -> Result<ReductionArtifacts, Error> {
    if aux == 0 {
        return Err(Error::InvalidParameter {
            name: "aux",
            reason: "must be at least 1",
        });
    }
    let mut names: Vec<String> = Vec::new();
    let mut fresh = |name: String| {
        names.push(name);
        names.len() - 1
    };
    let vertex_gadgets: Vec<VertexGadget> = (1..=cover.n)
        .map(|i| VertexGadget {
            a: fresh(format!("a_{i}")),
            b: fresh(format!("b_{i}")),
            a_p: fresh(format!("a'_{i}")),
            b_p: fresh(format!("b'_{i}")),
            aux: (0..aux).map(|k| fresh(format!("u_{i}^{k}"))).collect(),
        })
        .collect();
    let edge_gadgets: Vec<EdgeGadget> = cover
        .edges
        .iter()
        .map(|&(i, j)| {
            let mut v = |role: &str| fresh(format!("{role}_{i}~{j}"));
            EdgeGadget {
                s: v("s"),
                t: v("t"),
                s_p: v("s'"),
                t_p: v("t'"),
                s_pp: v("s''"),
                t_pp: v("t''"),
                v: v("v"),
                v_p: v("v'"),
                w: v("w"),
                w_p: v("w'"),
                c: v("c"),
                d: v("d"),
                c_p: v("c'"),
                d_p: v("d'"),
            }
        })
        .collect();

    let mut rankings: Vec<Vec<(Vertex, u32)>> = vec![Vec::new(); names.len()];
    let mut rank = |u: Vertex, list: &[(Vertex, u32)]| rankings[u].extend_from_slice(list);
    let mut inter_gadget_edges = Vec::new();
    for (idx, z) in vertex_gadgets.iter().enumerate() {
        let i = idx + 1;
        let mut a_list = vec![(z.b, 1), (z.b_p, 2)];
        a_list.extend(z.aux.iter().map(|&u| (u, 3)));
        rank(z.a, &a_list);
        rank(z.a_p, &[(z.b, 1), (z.b_p, 2)]);
        rank(z.b_p, &[(z.a, 1), (z.a_p, 2)]);
        let mut b_list = vec![(z.a, 1), (z.a_p, 2)];
        for (&(lo, hi), y) in cover.edges.iter().zip(&edge_gadgets) {
            if lo == i {
                b_list.push((y.d, 3));
            } else if hi == i {
                b_list.push((y.d_p, 3));
            }
        }
        rank(z.b, &b_list);
        for &u in &z.aux {
            rank(u, &[(z.a, 1)]);
        }
    }
    for (&(i, j), y) in cover.edges.iter().zip(&edge_gadgets) {
        let bi = vertex_gadgets[i - 1].b;
        let bj = vertex_gadgets[j - 1].b;
        rank(y.s, &[(y.t_p, 1), (y.c, 2), (y.t_pp, 3), (y.v_p, 4), (y.v, 5)]);
        rank(y.t, &[(y.s_pp, 1), (y.c_p, 2), (y.s_p, 3), (y.w_p, 4), (y.w, 5)]);
        rank(y.s_p, &[(y.t_p, 1), (y.t, 2)]);
        rank(y.t_p, &[(y.s_p, 1), (y.s, 2)]);
        rank(y.s_pp, &[(y.t_pp, 1), (y.t, 2)]);
        rank(y.t_pp, &[(y.s_pp, 1), (y.s, 2)]);
        rank(y.v, &[(y.s, 1), (y.v_p, 2)]);
        rank(y.v_p, &[(y.v, 1), (y.s, 2)]);
        rank(y.w, &[(y.t, 1), (y.w_p, 2)]);
        rank(y.w_p, &[(y.w, 1), (y.t, 2)]);
        rank(y.c, &[(y.d, 1), (y.s, 2)]);
        rank(y.d, &[(y.c, 1), (bi, 1)]);
        rank(y.c_p, &[(y.d_p, 1), (y.t, 2)]);
        rank(y.d_p, &[(y.c_p, 1), (bj, 1)]);
        inter_gadget_edges.push((bi, y.d));
        inter_gadget_edges.push((bj, y.d_p));
    }
    let instance = Instance::new(names, rankings)?;
    Ok(ReductionArtifacts {
        cover: cover.clone(),
        aux,
        instance,
        vertex_gadgets,
        edge_gadgets,
        inter_gadget_edges,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetState {
    Red,
    Blue,
}

/// Which canonical matching an edge gadget uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeChoice {
    F,
    L,
}

/// A state for every vertex gadget (`states[i - 1]` for vertex `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateAssignment {
    pub states: Vec<GadgetState>,
}

impl StateAssignment {
    /// Blue exactly on the given 1-based vertices.
    pub fn blue_on(n: usize, blue: &[usize]) -> Self {
        let mut states = vec![GadgetState::Red; n];
        for &i in blue {
            states[i - 1] = GadgetState::Blue;
        }
        StateAssignment { states }
    }

    pub fn state(&self, i: usize) -> GadgetState {
        self.states[i - 1]
    }

    /// `F` iff the lower endpoint is blue.
    pub fn edge_choice(&self, e: (usize, usize)) -> EdgeChoice {
        match self.state(e.0) {
            GadgetState::Blue => EdgeChoice::F,
            GadgetState::Red => EdgeChoice::L,
        }
    }

    /// First H-edge with both endpoints red, if any.
    pub fn uncovered_edge(&self, cover: &CoverInstance) -> Option<(usize, usize)> {
        cover
            .edges()
            .iter()
            .copied()
            .find(|&(i, j)| self.state(i) == GadgetState::Red && self.state(j) == GadgetState::Red)
    }

    fn check(&self, cover: &CoverInstance) -> Result<(), Error> {
        if self.states.len() != cover.num_vertices() {
            return Err(Error::InvalidParameter {
                name: "states",
                reason: "one state per cover vertex is required",
            });
        }
        Ok(())
    }
}

/// Every vertex gadget in its assigned state, every edge gadget on `F_e` or
/// `L_e`, auxiliary vertices free. With `strict`, an H-edge with two red
/// endpoints is rejected.
pub fn build_state_matching(
    art: &ReductionArtifacts,
    states: &StateAssignment,
    strict: bool,
) -> Result<Matching, Error> {
    states.check(&art.cover)?;
    if strict {
        if let Some((i, j)) = states.uncovered_edge(&art.cover) {
            return Err(Error::UncoveredEdge { i, j });
        }
    }
    let mut pairs = Vec::new();
    for (idx, z) in art.vertex_gadgets.iter().enumerate() {
        match states.states[idx] {
            GadgetState::Red => pairs.extend([(z.a, z.b), (z.a_p, z.b_p)]),
            GadgetState::Blue => pairs.extend([(z.a, z.b_p), (z.a_p, z.b)]),
        }
    }
    for (&e, y) in art.cover.edges().iter().zip(&art.edge_gadgets) {
        match states.edge_choice(e) {
            EdgeChoice::F => pairs.extend(y.f_matching()),
            EdgeChoice::L => pairs.extend(y.l_matching()),
        }
    }
    Matching::from_pairs(&art.instance, &pairs)
}

/// Vertex potentials certifying that the state matching is popular.
///
/// Edge gadgets take the `F` table when the lower endpoint is blue and the
/// mirrored table otherwise; vertex gadgets take the table of their state;
/// auxiliary vertices get zero.
pub fn build_dual_certificate(art: &ReductionArtifacts, states: &StateAssignment) -> Result<DualCertificate, Error> {
    states.check(&art.cover)?;
    if let Some((i, j)) = states.uncovered_edge(&art.cover) {
        return Err(Error::UncoveredEdge { i, j });
    }
    let mut y = vec![0i64; art.instance.num_vertices()];
    for (idx, z) in art.vertex_gadgets.iter().enumerate() {
        let (a, b, a_p, b_p) = match states.states[idx] {
            GadgetState::Blue => (1, 1, -1, -1),
            GadgetState::Red => (1, -1, 1, -1),
        };
        y[z.a] = a;
        y[z.b] = b;
        y[z.a_p] = a_p;
        y[z.b_p] = b_p;
    }
    for (&e, g) in art.cover.edges().iter().zip(&art.edge_gadgets) {
        let g = match states.edge_choice(e) {
            EdgeChoice::F => *g,
            EdgeChoice::L => g.mirrored(),
        };
        for (v, value) in [
            (g.s, -1),
            (g.t, -1),
            (g.s_p, -1),
            (g.s_pp, 1),
            (g.t_pp, 1),
            (g.t_p, 1),
            (g.v, 1),
            (g.w, 1),
            (g.v_p, -1),
            (g.w_p, -1),
            (g.c, 1),
            (g.d, -1),
            (g.c_p, -1),
            (g.d_p, 1),
        ] {
            y[v] = value;
        }
    }
    Ok(DualCertificate { y })
}

/// State of `Z_i` (1-based) in `m`, if canonical.
pub fn gadget_state(art: &ReductionArtifacts, m: &Matching, i: usize) -> Option<GadgetState> {
    let z = &art.vertex_gadgets[i - 1];
    if m.contains(z.a, z.b) && m.contains(z.a_p, z.b_p) {
        Some(GadgetState::Red)
    } else if m.contains(z.a, z.b_p) && m.contains(z.a_p, z.b) {
        Some(GadgetState::Blue)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverExtraction {
    /// 1-based vertices whose gadgets are blue.
    pub cover: Vec<usize>,
    pub covering: bool,
}

/// Reads the blue gadgets of `m` as a vertex set.
pub fn extract_cover(art: &ReductionArtifacts, m: &Matching) -> Result<CoverExtraction, Error> {
    m.validate(&art.instance)?;
    for &(u, v) in &art.inter_gadget_edges {
        if m.contains(u, v) {
            return Err(Error::InterGadgetEdge {
                u: art.instance.name(u).into(),
                v: art.instance.name(v).into(),
            });
        }
    }
    let mut flags = vec![false; art.cover.num_vertices()];
    for i in 1..=art.cover.num_vertices() {
        match gadget_state(art, m, i) {
            None => return Err(Error::NonCanonicalGadget { vertex: i }),
            Some(GadgetState::Blue) => flags[i - 1] = true,
            Some(GadgetState::Red) => {}
        }
    }
    Ok(CoverExtraction {
        covering: art.cover.is_cover(&flags),
        cover: (1..=art.cover.num_vertices()).filter(|&i| flags[i - 1]).collect(),
    })
}
