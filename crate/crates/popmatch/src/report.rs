//! JSON report documents and the manifest embedded in each of them.

use std::fmt::Write as _;

use popmatch_core::{Instance, Matching, Rational};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to rerun a command. Two runs with the same manifest
/// (ignoring `duration_ms`) produce the same report.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Every flag, defaults included.
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    /// `sha256:<hex>` of the input file bytes.
    pub input_digest: Option<String>,
    pub tool_version: &'static str,
    pub duration_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Document<T> {
    pub manifest: RunManifest,
    pub report: T,
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::from("sha256:");
    for b in hash {
        let _ = write!(out, "{b:02x}");
    }
    out
}

/// `"5/2"`, or `"3"` for integers.
pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Pairs of `m` as vertex names.
pub fn named_pairs(inst: &Instance, m: &Matching) -> Vec<[String; 2]> {
    m.pairs()
        .into_iter()
        .map(|(u, v)| [inst.name(u).to_string(), inst.name(v).to_string()])
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingRow {
    pub index: usize,
    pub pairs: Vec<[String; 2]>,
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub score: String,
    pub alpha_score: String,
    pub wt_score: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<MatchingFlags>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchingFlags {
    pub popular: bool,
    pub semi_popular: bool,
    pub condorcet: bool,
    pub stable: bool,
    pub pareto_optimal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub mu: usize,
    pub alpha: String,
    pub half_mu: String,
    pub copeland_winners: Vec<usize>,
    pub weak_copeland_winners: Vec<usize>,
    pub popular: Option<Vec<usize>>,
    pub warnings: Vec<String>,
    pub matchings: Vec<MatchingRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElectReport {
    pub first: Vec<[String; 2]>,
    pub second: Vec<[String; 2]>,
    pub votes_for: u32,
    pub votes_against: u32,
    pub delta: i64,
    pub outcome: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct TournamentCounters {
    pub samples: [Vec<Vec<[String; 2]>>; 2],
    pub wins: [Vec<u64>; 2],
    pub ties: [Vec<u64>; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct FprasTrial {
    pub trial: u64,
    pub seed: u64,
    pub k: u64,
    pub winner: Vec<[String; 2]>,
    /// `(side, position)` of the winner.
    pub winner_index: (usize, usize),
    pub winner_primed_score: String,
    pub winner_bound_ok: bool,
    pub conservation_ok: bool,
    /// True Copeland score, when the instance can be enumerated.
    pub oracle_score: Option<String>,
    pub above_threshold: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<TournamentCounters>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FprasReport {
    pub epsilon: String,
    pub backend: String,
    pub mu: Option<usize>,
    /// `μ/2 · (1 − ε)`.
    pub threshold: Option<String>,
    pub trials: Vec<FprasTrial>,
    pub all_winner_bounds_ok: bool,
    pub pass_rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightsDoc {
    /// `"u v" → weight` in edge order.
    pub edges: Vec<(String, String, String)>,
    /// `vertex → loop weight`.
    pub loops: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WtExactReport {
    pub matching: Vec<[String; 2]>,
    pub wt_score: String,
    pub mu: Option<u64>,
    pub weights: WeightsDoc,
}

#[derive(Clone, Debug, Serialize)]
pub struct WtApxTrial {
    pub trial: u64,
    pub seed: u64,
    pub matching: Vec<[String; 2]>,
    pub estimated_value: String,
    pub wt_score: Option<String>,
    pub gap: Option<String>,
    pub within_epsilon: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WtApxReport {
    pub epsilon: String,
    pub backend: String,
    pub num_samples: u64,
    pub exact_max: Option<String>,
    pub trials: Vec<WtApxTrial>,
    pub pass_rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexGadgetMap {
    pub vertex: usize,
    pub a: String,
    pub b: String,
    pub a_prime: String,
    pub b_prime: String,
    pub aux: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeGadgetMap {
    pub edge: (usize, usize),
    /// Role name → vertex name.
    pub roles: Vec<(&'static str, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetMap {
    pub aux: usize,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub vertex_gadgets: Vec<VertexGadgetMap>,
    pub edge_gadgets: Vec<EdgeGadgetMap>,
    pub inter_gadget_edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub aux: usize,
    pub blue: Vec<usize>,
    pub feasible: bool,
    pub objective: i64,
    pub certifies_popularity: bool,
    pub min_inter_gadget_slack: Option<i64>,
    pub violations: Vec<String>,
    /// Independent check by the maximum-weight matching solver.
    pub solver_popular: Option<bool>,
    pub certificate: Vec<(String, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleDiagReport {
    pub mu: u64,
    pub steps: u64,
    pub laziness: String,
    pub num_samples: u64,
    pub total_variation: String,
    pub total_variation_f64: f64,
    pub stationarity: Option<StationarityDoc>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StationarityDoc {
    pub rows_stochastic: bool,
    pub symmetric: bool,
    pub uniform_stationary: bool,
    pub positive_diagonal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalDoc {
    pub ties: u64,
    pub defeats: u64,
    pub tie_list_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeGadgetDoc {
    pub edge: (usize, usize),
    pub mu: usize,
    pub f: CanonicalDoc,
    pub l: CanonicalDoc,
    pub min_defeats_or_ties: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexGadgetDoc {
    pub vertex: usize,
    pub mu: usize,
    pub red_ties: u64,
    pub red_defeats: u64,
    pub blue_ties: u64,
    pub blue_defeats: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessDoc {
    pub edge: (usize, usize),
    pub case: String,
    pub mirrored: bool,
    pub deltas: Vec<i64>,
    pub confirmed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetReportDoc {
    pub aux: usize,
    pub edges: Vec<EdgeGadgetDoc>,
    pub vertices: Vec<VertexGadgetDoc>,
    /// Witnesses against the all-red state matching.
    pub witnesses: Vec<WitnessDoc>,
    pub all_hold: bool,
}
