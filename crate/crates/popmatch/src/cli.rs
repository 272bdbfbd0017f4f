//! Command-line front end. Every command prints one JSON document (or an
//! instance file for `reduce` and `random`) and exits 0 only when all of
//! its checks held.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use popmatch_core::election::{compare, is_stable, Outcome};
use popmatch_core::fpras::{run_fpras, verify_winner_bound, FprasConfig};
use popmatch_core::model::random_instance;
use popmatch_core::oracle::{count_matchings, enumerate_matchings, Oracle, DEFAULT_BUDGET};
use popmatch_core::rational::{parse_rational, to_f64};
use popmatch_core::reduction::gadgets::{verify_gadgets, verify_red_red_witnesses, CanonicalCheck};
use popmatch_core::reduction::{
    build_dual_certificate, build_reduction, build_state_matching, CoverInstance, ReductionArtifacts,
    StateAssignment,
};
use popmatch_core::sampler::{
    check_stationarity, default_steps, total_variation, transition_matrix, Backend, Sampler, SamplerConfig,
};
use popmatch_core::weighted::{
    exact_wt_star, is_popular_via_solver, verify_dual, weighted_copeland_apx, weighted_copeland_exact,
    EdgeWeights, SolverBackend, Violation,
};
use popmatch_core::{Error, Instance, Matching, Rational};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::{
    parse_cover, parse_instance, parse_matching, serialize_instance, serialize_matching, validation_warnings,
    FormatError,
};
use crate::report::*;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "popmatch", version, about = "Popular, Copeland and weighted Copeland matchings in roommates instances")]
pub struct Cli {
    /// Worker threads for independent trials and samples. Results do not
    /// depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Maximum number of matchings any enumeration may visit.
    #[arg(long, global = true, env = "POPMATCH_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Print a one-line human summary on standard error.
    #[arg(long, global = true)]
    pub summary: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Score table, winner sets and per-matching properties.
    Enumerate(EnumerateArgs),
    /// One head-to-head election between two matchings.
    Elect(ElectArgs),
    /// Sample-based Copeland tournament.
    Fpras(FprasArgs),
    /// Weighted Copeland winner, exact or from sampled marginals.
    Wtscore(WtscoreArgs),
    /// Build the roommates instance of a vertex cover input.
    Reduce(ReduceArgs),
    /// Check the popularity certificate of a state assignment.
    Certify(CertifyArgs),
    /// Empirical distance of the chain from uniform.
    SampleDiag(SampleDiagArgs),
    /// Exhaustive checks of the reduction gadgets.
    VerifyGadgets(VerifyGadgetsArgs),
    /// Generate a random instance.
    Random(RandomArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    pub instance: PathBuf,
    /// Weight of a tie in the Copeland score.
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    /// Also report popularity, stability and related flags per matching.
    #[arg(long)]
    pub flags: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ElectArgs {
    pub instance: PathBuf,
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Chain steps per sample (default depends on the command).
    #[arg(long, conflicts_with = "exact_uniform")]
    pub steps: Option<u64>,
    /// Draw exactly uniform samples from the enumerated matchings.
    #[arg(long)]
    pub exact_uniform: bool,
    /// Independent repetitions; trial `t` uses seed `seed + t`.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct FprasArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub epsilon: String,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Sample size per side instead of `⌈32 ln n / ε²⌉`.
    #[arg(long)]
    pub k: Option<u64>,
    /// Include both samples and every counter.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WtMode {
    Exact,
    Apx,
}

#[derive(Debug, Args, Serialize)]
pub struct WtscoreArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: WtMode,
    #[arg(long, default_value = "1/4")]
    pub epsilon: String,
    /// Samples per trial in apx mode (default from ε and the instance size).
    #[arg(long)]
    pub samples: Option<u64>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    /// Vertex cover input (`p vc n m`, `e i j`).
    pub cover: PathBuf,
    /// Auxiliary vertices per vertex gadget.
    #[arg(long, default_value_t = 100)]
    pub aux: usize,
    /// Write the gadget map document here.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    pub cover: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub aux: usize,
    /// Vertices (1-based) whose gadgets are blue; all others are red.
    #[arg(long, value_delimiter = ',')]
    pub blue: Vec<usize>,
    /// Confirm popularity with the maximum-weight matching solver too.
    #[arg(long)]
    pub solver: bool,
    /// Write the state matching here.
    #[arg(long)]
    pub emit_matching: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleDiagArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Steps per sample (default `⌈10|E||V| ln(1/δ)⌉`).
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long, default_value = "1/100")]
    pub delta: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value = "1/2")]
    pub laziness: String,
    /// Build the transition matrix when there are at most this many
    /// matchings.
    #[arg(long, default_value_t = 200)]
    pub matrix_limit: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyGadgetsArgs {
    pub cover: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub aux: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "1/2")]
    pub p: String,
    #[arg(long, default_value_t = 3)]
    pub tiers: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// What a command produced, before the manifest is attached.
struct Output {
    body: Body,
    seeds: Vec<u64>,
    digest: Option<String>,
    ok: bool,
    summary: String,
}

enum Body {
    Json(serde_json::Value),
    Text(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_instance(path: &Path) -> Result<(Instance, String), CliError> {
    let text = read(path)?;
    let inst = parse_instance(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((inst, digest(text.as_bytes())))
}

fn load_matching(path: &Path, inst: &Instance) -> Result<Matching, CliError> {
    parse_matching(&read(path)?, inst).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })
}

fn load_cover(path: &Path) -> Result<(CoverInstance, String), CliError> {
    let text = read(path)?;
    let cover = parse_cover(&text).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((cover, digest(text.as_bytes())))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("--{name}: cannot read {text:?} as a number")))
}

fn positive_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    let value = rational_arg(name, text)?;
    if value <= Rational::from_integer(0) {
        return Err(CliError::Usage(format!("--{name} must be positive")));
    }
    Ok(value)
}

/// The oracle, or `None` when the instance has too many matchings.
fn try_oracle(inst: &Instance, budget: u64) -> Result<Option<Oracle<'_>>, CliError> {
    match Oracle::new(inst, budget) {
        Ok(o) => Ok(Some(o)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn json<T: Serialize>(value: &T) -> Result<Body, CliError> {
    Ok(Body::Json(serde_json::to_value(value)?))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?)
}

/// Runs the command and writes its output. `Ok(false)` means the command
/// finished but one of its checks failed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let out = match &cli.command {
        Command::Enumerate(a) => enumerate(cli, a)?,
        Command::Elect(a) => elect(a)?,
        Command::Fpras(a) => fpras(cli, a)?,
        Command::Wtscore(a) => wtscore(cli, a)?,
        Command::Reduce(a) => reduce(cli, a, start)?,
        Command::Certify(a) => certify(a)?,
        Command::SampleDiag(a) => sample_diag(cli, a)?,
        Command::VerifyGadgets(a) => check_gadgets(a)?,
        Command::Random(a) => random(a)?,
    };
    let text = match out.body {
        Body::Json(report) => {
            let doc = Document {
                manifest: manifest(cli, out.seeds, out.digest, start)?,
                report,
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Body::Text(t) => t,
    };
    match &cli.output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if cli.summary {
        eprintln!("{}", out.summary);
    }
    Ok(out.ok)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Enumerate(_) => "enumerate",
        Command::Elect(_) => "elect",
        Command::Fpras(_) => "fpras",
        Command::Wtscore(_) => "wtscore",
        Command::Reduce(_) => "reduce",
        Command::Certify(_) => "certify",
        Command::SampleDiag(_) => "sample-diag",
        Command::VerifyGadgets(_) => "verify-gadgets",
        Command::Random(_) => "random",
    }
}

fn manifest(cli: &Cli, seeds: Vec<u64>, input_digest: Option<String>, start: Instant) -> Result<RunManifest, CliError> {
    Ok(RunManifest {
        command: command_name(&cli.command).to_string(),
        config: serde_json::to_value(cli)?,
        seeds,
        input_digest,
        tool_version: env!("CARGO_PKG_VERSION"),
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

fn enumerate(cli: &Cli, a: &EnumerateArgs) -> Result<Output, CliError> {
    let (inst, digest) = load_instance(&a.instance)?;
    let alpha = rational_arg("alpha", &a.alpha)?;
    let oracle = Oracle::new(&inst, cli.budget)?;
    let table = oracle.score_table();
    let winners = oracle.copeland_winners(&table, alpha)?;
    let weak = oracle.weak_copeland_winners(&table);
    let wt = oracle.wt_scores();
    let mut rows = Vec::with_capacity(oracle.mu());
    let mut popular = Vec::new();
    for (i, m) in oracle.matchings().iter().enumerate() {
        let flags = if a.flags {
            let f = MatchingFlags {
                popular: oracle.is_popular(m)?,
                semi_popular: oracle.is_semi_popular(m)?,
                condorcet: oracle.is_condorcet(m)?,
                stable: is_stable(&inst, m),
                pareto_optimal: oracle.is_pareto_optimal(m)?,
            };
            if f.popular {
                popular.push(i);
            }
            Some(f)
        } else {
            None
        };
        let r = &table[i];
        rows.push(MatchingRow {
            index: i,
            pairs: named_pairs(&inst, m),
            wins: r.wins,
            ties: r.ties,
            losses: r.losses,
            score: rational(&r.score()),
            alpha_score: rational(&r.alpha_score(alpha)),
            wt_score: rational(&wt[i]),
            flags,
        });
    }
    let summary = format!(
        "mu = {}, {} Copeland winner(s), {} weak{}",
        oracle.mu(),
        winners.len(),
        weak.len(),
        if a.flags { format!(", {} popular", popular.len()) } else { String::new() }
    );
    let report = EnumerateReport {
        num_vertices: inst.num_vertices(),
        num_edges: inst.num_edges(),
        mu: oracle.mu(),
        alpha: rational(&alpha),
        half_mu: rational(&oracle.half_mu()),
        copeland_winners: winners,
        weak_copeland_winners: weak,
        popular: a.flags.then_some(popular),
        warnings: validation_warnings(&inst),
        matchings: rows,
    };
    Ok(Output {
        body: json(&report)?,
        seeds: Vec::new(),
        digest: Some(digest),
        ok: true,
        summary,
    })
}

fn elect(a: &ElectArgs) -> Result<Output, CliError> {
    let (inst, digest) = load_instance(&a.instance)?;
    let m = load_matching(&a.first, &inst)?;
    let n = load_matching(&a.second, &inst)?;
    let r = compare(&inst, &m, &n)?;
    let outcome = match r.outcome {
        Outcome::Win => "win",
        Outcome::Tie => "tie",
        Outcome::Loss => "loss",
    };
    let report = ElectReport {
        first: named_pairs(&inst, &m),
        second: named_pairs(&inst, &n),
        votes_for: r.votes_for,
        votes_against: r.votes_against,
        delta: r.delta,
        outcome,
    };
    Ok(Output {
        body: json(&report)?,
        seeds: Vec::new(),
        digest: Some(digest),
        ok: true,
        summary: format!("{outcome}: {} for, {} against", r.votes_for, r.votes_against),
    })
}

fn backend_name(b: &Backend) -> String {
    match b {
        Backend::ExactUniform => "exact-uniform".to_string(),
        Backend::Mcmc { steps, laziness } => format!("mcmc steps={steps} laziness={}", rational(laziness)),
    }
}

fn fpras(cli: &Cli, a: &FprasArgs) -> Result<Output, CliError> {
    let (inst, digest) = load_instance(&a.instance)?;
    let eps = positive_arg("epsilon", &a.epsilon)?;
    let s = &a.sampling;
    let mut cfg = if s.exact_uniform {
        FprasConfig::exact_uniform(eps, s.seed)
    } else {
        let mut cfg = FprasConfig::with_default_chain(&inst, eps, s.seed)?;
        if let Some(steps) = s.steps {
            if let Backend::Mcmc { laziness, .. } = cfg.backend {
                cfg.backend = Backend::Mcmc { steps, laziness };
            }
        }
        cfg
    };
    cfg.k_override = a.k;
    cfg.k(inst.num_vertices())?;
    let oracle = try_oracle(&inst, cli.budget)?;
    let threshold = oracle.as_ref().map(|o| o.half_mu() * (Rational::from_integer(1) - eps));
    let seeds: Vec<u64> = (0..s.trials).map(|t| s.seed.wrapping_add(t)).collect();

    let trials: Vec<FprasTrial> = pool(cli.jobs)?.install(|| {
        seeds
            .par_iter()
            .enumerate()
            .map(|(t, &seed)| {
                let report = run_fpras(&inst, &FprasConfig { seed, ..cfg }, cli.budget)?;
                let score = match &oracle {
                    Some(o) => Some(o.record_of(&report.winner)?.score()),
                    None => None,
                };
                let counters = a.full.then(|| TournamentCounters {
                    samples: [0, 1].map(|side| report.samples[side].iter().map(|m| named_pairs(&inst, m)).collect()),
                    wins: report.wins.clone(),
                    ties: report.ties.clone(),
                });
                Ok(FprasTrial {
                    trial: t as u64,
                    seed,
                    k: report.k,
                    winner: named_pairs(&inst, &report.winner),
                    winner_index: report.winner_index,
                    winner_primed_score: rational(&report.winner_primed_score),
                    winner_bound_ok: verify_winner_bound(&report),
                    conservation_ok: report.conservation_holds(),
                    oracle_score: score.as_ref().map(rational),
                    above_threshold: score.zip(threshold).map(|(s, th)| s > th),
                    counters,
                })
            })
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let all_ok = trials.iter().all(|t| t.winner_bound_ok && t.conservation_ok);
    let pass_rate = threshold.map(|_| {
        trials.iter().filter(|t| t.above_threshold == Some(true)).count() as f64 / trials.len().max(1) as f64
    });
    let summary = match pass_rate {
        Some(r) => format!("{} trial(s), winner above threshold in {:.1}%", trials.len(), 100.0 * r),
        None => format!("{} trial(s), instance too large to score", trials.len()),
    };
    let report = FprasReport {
        epsilon: rational(&eps),
        backend: backend_name(&cfg.backend),
        mu: oracle.as_ref().map(|o| o.mu()),
        threshold: threshold.as_ref().map(rational),
        trials,
        all_winner_bounds_ok: all_ok,
        pass_rate,
    };
    Ok(Output {
        body: json(&report)?,
        seeds,
        digest: Some(digest),
        ok: all_ok,
        summary,
    })
}

fn weights_doc(inst: &Instance, w: &EdgeWeights) -> WeightsDoc {
    WeightsDoc {
        edges: inst
            .edges()
            .iter()
            .zip(&w.edge_weight)
            .map(|(&(u, v), x)| (inst.name(u).to_string(), inst.name(v).to_string(), rational(x)))
            .collect(),
        loops: w
            .loop_weight
            .iter()
            .enumerate()
            .map(|(u, x)| (inst.name(u).to_string(), rational(x)))
            .collect(),
    }
}

fn wtscore(cli: &Cli, a: &WtscoreArgs) -> Result<Output, CliError> {
    let (inst, digest) = load_instance(&a.instance)?;
    match a.mode {
        WtMode::Exact => {
            let sol = weighted_copeland_exact(&inst, cli.budget, SolverBackend::Blossom)?;
            let w = exact_wt_star(&inst, cli.budget)?;
            let summary = format!("wt-score {} with {} pair(s)", rational(&sol.value), sol.matching.num_pairs());
            let report = WtExactReport {
                matching: named_pairs(&inst, &sol.matching),
                wt_score: rational(&sol.value),
                mu: Some(count_matchings(&inst, cli.budget)?),
                weights: weights_doc(&inst, &w),
            };
            Ok(Output {
                body: json(&report)?,
                seeds: Vec::new(),
                digest: Some(digest),
                ok: true,
                summary,
            })
        }
        WtMode::Apx => wtscore_apx(cli, a, inst, digest),
    }
}

fn wtscore_apx(cli: &Cli, a: &WtscoreArgs, inst: Instance, digest: String) -> Result<Output, CliError> {
    let eps = positive_arg("epsilon", &a.epsilon)?;
    let s = &a.sampling;
    let backend = if s.exact_uniform {
        Backend::ExactUniform
    } else {
        let steps = match s.steps {
            Some(steps) => steps,
            None => default_steps(&inst, Rational::new(1, 100))?,
        };
        Backend::Mcmc {
            steps,
            laziness: Rational::new(1, 2),
        }
    };
    let sampler = Sampler::new(&inst, backend, cli.budget)?;
    let oracle = try_oracle(&inst, cli.budget)?;
    let best = oracle.as_ref().map(|o| o.wt_scores().into_iter().max().expect("at least the empty matching"));
    let seeds: Vec<u64> = (0..s.trials).map(|t| s.seed.wrapping_add(t)).collect();
    let results = pool(cli.jobs)?.install(|| {
        seeds
            .par_iter()
            .enumerate()
            .map(|(t, &seed)| {
                let apx = weighted_copeland_apx(&inst, eps, &sampler, seed, a.samples, SolverBackend::Blossom)?;
                let score = match &oracle {
                    Some(o) => Some(o.wt_score(&apx.matching)?),
                    None => None,
                };
                let gap = score.zip(best).map(|(s, b)| b - s);
                Ok((
                    apx.num_samples,
                    WtApxTrial {
                        trial: t as u64,
                        seed,
                        matching: named_pairs(&inst, &apx.matching),
                        estimated_value: rational(&apx.estimated_value),
                        wt_score: score.as_ref().map(rational),
                        gap: gap.as_ref().map(rational),
                        within_epsilon: gap.map(|g| g <= eps),
                    },
                ))
            })
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let num_samples = results.first().map_or(0, |r| r.0);
    let trials: Vec<WtApxTrial> = results.into_iter().map(|r| r.1).collect();
    let pass_rate = best.map(|_| {
        trials.iter().filter(|t| t.within_epsilon == Some(true)).count() as f64 / trials.len().max(1) as f64
    });
    let summary = match pass_rate {
        Some(r) => format!("{} trial(s), within epsilon of the optimum in {:.1}%", trials.len(), 100.0 * r),
        None => format!("{} trial(s)", trials.len()),
    };
    let report = WtApxReport {
        epsilon: rational(&eps),
        backend: backend_name(&backend),
        num_samples,
        exact_max: best.as_ref().map(rational),
        trials,
        pass_rate,
    };
    Ok(Output {
        body: json(&report)?,
        seeds,
        digest: Some(digest),
        ok: true,
        summary,
    })
}

fn gadget_map(art: &ReductionArtifacts) -> GadgetMap {
    let inst = &art.instance;
    let name = |v| inst.name(v).to_string();
    GadgetMap {
        aux: art.aux,
        num_vertices: inst.num_vertices(),
        num_edges: inst.num_edges(),
        vertex_gadgets: art
            .vertex_gadgets
            .iter()
            .enumerate()
            .map(|(i, z)| VertexGadgetMap {
                vertex: i + 1,
                a: name(z.a),
                b: name(z.b),
                a_prime: name(z.a_p),
                b_prime: name(z.b_p),
                aux: z.aux.iter().map(|&u| name(u)).collect(),
            })
            .collect(),
        edge_gadgets: art
            .cover
            .edges()
            .iter()
            .zip(&art.edge_gadgets)
            .map(|(&edge, g)| {
                let roles = ["s", "t", "s'", "t'", "s''", "t''", "v", "v'", "w", "w'", "c", "d", "c'", "d'"];
                EdgeGadgetMap {
                    edge,
                    roles: roles.into_iter().zip(g.vertices()).map(|(r, v)| (r, name(v))).collect(),
                }
            })
            .collect(),
        inter_gadget_edges: art.inter_gadget_edges.iter().map(|&(u, v)| [name(u), name(v)]).collect(),
    }
}

fn reduce(cli: &Cli, a: &ReduceArgs, start: Instant) -> Result<Output, CliError> {
    let (cover, digest) = load_cover(&a.cover)?;
    let art = build_reduction(&cover, a.aux)?;
    if let Some(path) = &a.map {
        let doc = Document {
            manifest: manifest(cli, Vec::new(), Some(digest.clone()), start)?,
            report: gadget_map(&art),
        };
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        write(path, &text)?;
    }
    let header = format!(
        "# reduced from {} ({digest}), aux {}\n",
        a.cover.file_name().map_or_else(|| a.cover.display().to_string(), |f| f.to_string_lossy().into_owned()),
        a.aux
    );
    Ok(Output {
        body: Body::Text(header + &serialize_instance(&art.instance)),
        seeds: Vec::new(),
        digest: Some(digest),
        ok: true,
        summary: format!(
            "{} vertices, {} edges",
            art.instance.num_vertices(),
            art.instance.num_edges()
        ),
    })
}

fn certify(a: &CertifyArgs) -> Result<Output, CliError> {
    let (cover, digest) = load_cover(&a.cover)?;
    let n = cover.num_vertices();
    if let Some(&bad) = a.blue.iter().find(|&&i| i == 0 || i > n) {
        return Err(CliError::Usage(format!("--blue: vertex {bad} is not in 1..={n}")));
    }
    let art = build_reduction(&cover, a.aux)?;
    let states = StateAssignment::blue_on(n, &a.blue);
    let cert = build_dual_certificate(&art, &states)?;
    let m = build_state_matching(&art, &states, true)?;
    let dual = verify_dual(&art.instance, &m, &cert)?;
    let inst = &art.instance;
    let min_slack = art
        .inter_gadget_edges
        .iter()
        .map(|&(u, v)| dual.edge_slack[inst.edge_index(u, v).expect("inter-gadget edges exist")])
        .min();
    let solver_popular = if a.solver {
        Some(is_popular_via_solver(inst, &m, SolverBackend::Blossom)?.popular)
    } else {
        None
    };
    if let Some(path) = &a.emit_matching {
        write(path, &serialize_matching(inst, &m))?;
    }
    let violations = dual
        .violations
        .iter()
        .map(|v| match *v {
            Violation::Edge { u, v, slack } => format!("edge {} {}: slack {slack}", inst.name(u), inst.name(v)),
            Violation::Loop { u, slack } => format!("vertex {}: slack {slack}", inst.name(u)),
        })
        .collect();
    let ok = dual.certifies_popularity() && min_slack.map_or(true, |s| s >= 1) && solver_popular != Some(false);
    let mut blue = a.blue.clone();
    blue.sort_unstable();
    blue.dedup();
    let report = CertifyReport {
        aux: a.aux,
        blue,
        feasible: dual.feasible(),
        objective: dual.objective,
        certifies_popularity: dual.certifies_popularity(),
        min_inter_gadget_slack: min_slack,
        violations,
        solver_popular,
        certificate: cert.y.iter().enumerate().map(|(u, &y)| (inst.name(u).to_string(), y)).collect(),
    };
    Ok(Output {
        body: json(&report)?,
        seeds: Vec::new(),
        digest: Some(digest),
        ok,
        summary: format!(
            "objective {}, {} violation(s), popular {}",
            dual.objective,
            dual.violations.len(),
            if ok { "certified" } else { "not certified" }
        ),
    })
}

fn sample_diag(cli: &Cli, a: &SampleDiagArgs) -> Result<Output, CliError> {
    let (inst, digest) = load_instance(&a.instance)?;
    let laziness = rational_arg("laziness", &a.laziness)?;
    let steps = match a.steps {
        Some(s) => s,
        None => default_steps(&inst, rational_arg("delta", &a.delta)?)?,
    };
    SamplerConfig {
        steps,
        seed: a.seed,
        laziness,
    }
    .validate()?;
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let universe = enumerate_matchings(&inst, cli.budget)?;
    let sampler = Sampler::new(&inst, Backend::Mcmc { steps, laziness }, cli.budget)?;
    // Sample i always runs on stream i, so chunking does not change counts.
    const CHUNK: u64 = 1024;
    let chunks: Vec<u64> = (0..a.samples.div_ceil(CHUNK)).collect();
    let partial: Vec<Vec<(Matching, u64)>> = pool(cli.jobs)?.install(|| {
        chunks
            .par_iter()
            .map(|&c| {
                let first = c * CHUNK;
                let count = CHUNK.min(a.samples - first) as usize;
                sampler.histogram(a.seed, first, count)
            })
            .collect()
    });
    let mut counts: BTreeMap<&Matching, u64> = universe.iter().map(|m| (m, 0)).collect();
    for (m, c) in partial.iter().flatten() {
        *counts.get_mut(m).expect("the chain stays inside the matchings") += c;
    }
    let tv = total_variation(counts.values().copied(), a.samples);
    let stationarity = if universe.len() as u64 <= a.matrix_limit {
        let r = check_stationarity(&transition_matrix(&inst, &universe, laziness)?);
        Some(StationarityDoc {
            rows_stochastic: r.rows_stochastic,
            symmetric: r.symmetric,
            uniform_stationary: r.uniform_stationary,
            positive_diagonal: r.positive_diagonal,
        })
    } else {
        None
    };
    let ok = stationarity.map_or(true, |s| {
        s.rows_stochastic && s.symmetric && s.uniform_stationary && s.positive_diagonal
    });
    let report = SampleDiagReport {
        mu: universe.len() as u64,
        steps,
        laziness: rational(&laziness),
        num_samples: a.samples,
        total_variation: rational(&tv),
        total_variation_f64: to_f64(&tv),
        stationarity,
    };
    Ok(Output {
        body: json(&report)?,
        seeds: vec![a.seed],
        digest: Some(digest),
        ok,
        summary: format!("TV {:.4} over {} samples of {} matchings", to_f64(&tv), a.samples, universe.len()),
    })
}

fn canonical_doc(c: &CanonicalCheck) -> CanonicalDoc {
    CanonicalDoc {
        ties: c.ties,
        defeats: c.defeats,
        tie_list_matches: c.tie_list_matches,
    }
}

fn check_gadgets(a: &VerifyGadgetsArgs) -> Result<Output, CliError> {
    let (cover, digest) = load_cover(&a.cover)?;
    let art = build_reduction(&cover, a.aux)?;
    let report = verify_gadgets(&art)?;
    let all_red = build_state_matching(&art, &StateAssignment::blue_on(cover.num_vertices(), &[]), false)?;
    let witnesses = (0..cover.edges().len())
        .map(|e| verify_red_red_witnesses(&art, e, &all_red))
        .collect::<Result<Vec<_>, Error>>()?;
    let all_hold = report.all_hold() && witnesses.iter().all(|w| w.all_confirmed());
    let doc = GadgetReportDoc {
        aux: report.aux,
        edges: report
            .edges
            .iter()
            .map(|e| EdgeGadgetDoc {
                edge: e.edge,
                mu: e.mu,
                f: canonical_doc(&e.f),
                l: canonical_doc(&e.l),
                min_defeats_or_ties: e.min_defeats_or_ties,
                holds: e.holds(),
            })
            .collect(),
        vertices: report
            .vertices
            .iter()
            .map(|z| VertexGadgetDoc {
                vertex: z.vertex,
                mu: z.mu,
                red_ties: z.red_ties,
                red_defeats: z.red_defeats,
                blue_ties: z.blue_ties,
                blue_defeats: z.blue_defeats,
                holds: z.holds(),
            })
            .collect(),
        witnesses: witnesses
            .iter()
            .map(|w| WitnessDoc {
                edge: w.edge,
                case: format!("{:?}", w.case),
                mirrored: w.mirrored,
                deltas: w.deltas.clone(),
                confirmed: w.confirmed,
            })
            .collect(),
        all_hold,
    };
    Ok(Output {
        body: json(&doc)?,
        seeds: Vec::new(),
        digest: Some(digest),
        ok: all_hold,
        summary: format!(
            "{} edge gadget(s), {} vertex gadget(s): {}",
            doc.edges.len(),
            doc.vertices.len(),
            if all_hold { "all checks hold" } else { "some checks fail" }
        ),
    })
}

fn random(a: &RandomArgs) -> Result<Output, CliError> {
    let p = rational_arg("p", &a.p)?;
    let inst = random_instance(a.n, p, a.tiers, a.seed)?;
    let header = format!(
        "# popmatch random --n {} --p {} --tiers {} --seed {}\n",
        a.n, a.p, a.tiers, a.seed
    );
    Ok(Output {
        summary: format!("{} vertices, {} edges", inst.num_vertices(), inst.num_edges()),
        body: Body::Text(header + &serialize_instance(&inst)),
        seeds: vec![a.seed],
        digest: None,
        ok: true,
    })
}
