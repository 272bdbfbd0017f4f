//! Line-oriented text formats: instances (`instance v1`), matchings
//! (`match v1`) and vertex cover inputs (`p vc n m`).

use std::collections::HashMap;
use std::fmt::Write as _;

use popmatch_core::reduction::CoverInstance;
use popmatch_core::{Error, Instance, Matching, Vertex};
use thiserror::Error;

pub const INSTANCE_HEADER: &str = "instance v1";
pub const MATCHING_HEADER: &str = "match v1";

/// A parse failure, located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub kind: FormatErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatErrorKind {
    #[error("expected header `{0}`")]
    MissingHeader(&'static str),
    #[error("{0}")]
    Syntax(&'static str),
    #[error("agent {0} is listed twice")]
    DuplicateAgent(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("{0}")]
    Invalid(Error),
}

impl FormatError {
    fn new(line: usize, column: usize, kind: FormatErrorKind) -> Self {
        FormatError { line, column, kind }
    }

    fn syntax(line: usize, column: usize, what: &'static str) -> Self {
        Self::new(line, column, FormatErrorKind::Syntax(what))
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        (!trimmed.is_empty() && !trimmed.starts_with('#')).then_some((i + 1, raw))
    })
}

/// Column (1-based, in characters) of byte offset `at` within `line`.
fn column(line: &str, at: usize) -> usize {
    line[..at].chars().count() + 1
}

/// Splits `line[from..to]` on `sep`, yielding trimmed pieces with their
/// starting byte offsets.
fn pieces(line: &str, from: usize, to: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut push = |s: usize, e: usize| {
        let raw = &line[s..e];
        out.push((s + raw.len() - raw.trim_start().len(), raw.trim()));
    };
    let mut start = from;
    for (i, _) in line[from..to].char_indices().filter(|&(_, c)| c == sep) {
        push(start, from + i);
        start = from + i + sep.len_utf8();
    }
    push(start, to);
    out
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, ':' | '>' | '='))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &'static str,
) -> Result<(), FormatError> {
    match lines.next() {
        Some((_, line)) if line.split_whitespace().eq(header.split_whitespace()) => Ok(()),
        Some((n, line)) => {
            let at = line.len() - line.trim_start().len();
            Err(FormatError::new(n, column(line, at), FormatErrorKind::MissingHeader(header)))
        }
        None => Err(FormatError::new(1, 1, FormatErrorKind::MissingHeader(header))),
    }
}

struct AgentLine<'a> {
    line_no: usize,
    line: &'a str,
    name_at: usize,
    /// `(name, byte offset)` per tie group, best first.
    groups: Vec<Vec<(&'a str, usize)>>,
}

fn parse_agent_line(line_no: usize, line: &str) -> Result<(&str, AgentLine<'_>), FormatError> {
    let colon = line.find(':').ok_or_else(|| {
        let at = line.len() - line.trim_start().len();
        FormatError::syntax(line_no, column(line, at), "expected `name: ranking`")
    })?;
    let (name_at, name) = pieces(line, 0, colon, ':')[0];
    if !valid_name(name) {
        return Err(FormatError::syntax(line_no, column(line, name_at), "invalid agent name"));
    }
    let mut groups = Vec::new();
    if !line[colon + 1..].trim().is_empty() {
        for (g_at, group) in pieces(line, colon + 1, line.len(), '>') {
            if group.is_empty() {
                return Err(FormatError::syntax(line_no, column(line, g_at), "empty tie group"));
            }
            let mut members = Vec::new();
            for (at, member) in pieces(line, g_at, g_at + group.len(), '=') {
                if !valid_name(member) {
                    return Err(FormatError::syntax(line_no, column(line, at), "invalid vertex name"));
                }
                members.push((member, at));
            }
            groups.push(members);
        }
    }
    Ok((
        name,
        AgentLine {
            line_no,
            line,
            name_at,
            groups,
        },
    ))
}

/// Parses an instance file. Agents are indexed in file order.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, INSTANCE_HEADER)?;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<&str, Vertex> = HashMap::new();
    let mut agents: Vec<AgentLine<'_>> = Vec::new();
    for (line_no, line) in lines {
        let (name, agent) = parse_agent_line(line_no, line)?;
        if index.insert(name, names.len()).is_some() {
            return Err(FormatError::new(
                line_no,
                column(line, agent.name_at),
                FormatErrorKind::DuplicateAgent(name.to_string()),
            ));
        }
        names.push(name.to_string());
        agents.push(agent);
    }

    let mut rankings = Vec::with_capacity(agents.len());
    for agent in &agents {
        let mut ranking = Vec::new();
        for (tier, group) in agent.groups.iter().enumerate() {
            for &(member, at) in group {
                let v = *index.get(member).ok_or_else(|| {
                    FormatError::new(
                        agent.line_no,
                        column(agent.line, at),
                        FormatErrorKind::UnknownVertex(member.to_string()),
                    )
                })?;
                ranking.push((v, tier as u32 + 1));
            }
        }
        rankings.push(ranking);
    }

    Instance::new(names, rankings).map_err(|err| locate(&agents, &index, err))
}

/// Points a validation error at the agent line (and neighbour) it concerns.
fn locate(agents: &[AgentLine<'_>], index: &HashMap<&str, Vertex>, err: Error) -> FormatError {
    let (owner, neighbor) = match &err {
        Error::AsymmetricAcceptability { u, v } => (Some(u.as_str()), Some(v.as_str())),
        Error::SelfRanking { vertex } => (Some(vertex.as_str()), Some(vertex.as_str())),
        Error::DuplicateNeighbor { vertex, neighbor } => (Some(vertex.as_str()), Some(neighbor.as_str())),
        _ => (None, None),
    };
    let Some(agent) = owner.and_then(|o| index.get(o)).map(|&u| &agents[u]) else {
        return FormatError::new(1, 1, FormatErrorKind::Invalid(err));
    };
    let at = neighbor
        .and_then(|n| {
            agent
                .groups
                .iter()
                .flatten()
                .filter(|(m, _)| *m == n)
                .map(|&(_, at)| at)
                .last()
        })
        .unwrap_or(agent.name_at);
    FormatError::new(agent.line_no, column(agent.line, at), FormatErrorKind::Invalid(err))
}

/// Canonical text of `inst`; [`parse_instance`] reads it back unchanged.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::from(INSTANCE_HEADER);
    out.push('\n');
    for u in 0..inst.num_vertices() {
        out.push_str(inst.name(u));
        out.push(':');
        for (t, group) in inst.tiers(u).iter().enumerate() {
            out.push_str(if t == 0 { " " } else { " > " });
            let members: Vec<&str> = group.iter().map(|&v| inst.name(v)).collect();
            out.push_str(&members.join(" = "));
        }
        out.push('\n');
    }
    out
}

/// Vertices with an empty preference list. They are allowed, but usually
/// indicate a modelling mistake.
pub fn validation_warnings(inst: &Instance) -> Vec<String> {
    inst.isolated_vertices()
        .into_iter()
        .map(|u| format!("vertex {} has no acceptable partner", inst.name(u)))
        .collect()
}

/// Parses a matching file against `inst`.
pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching, FormatError> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, MATCHING_HEADER)?;
    let mut used = vec![false; inst.num_vertices()];
    let mut pairs = Vec::new();
    for (line_no, line) in lines {
        let tokens: Vec<(usize, &str)> = line
            .split_whitespace()
            .map(|tok| (tok.as_ptr() as usize - line.as_ptr() as usize, tok))
            .collect();
        let [(u_at, u), (_, "-"), (v_at, v)] = tokens[..] else {
            let at = tokens.first().map_or(0, |t| t.0);
            return Err(FormatError::syntax(line_no, column(line, at), "expected `u - v`"));
        };
        let lookup = |name: &str, at: usize| {
            inst.vertex(name).ok_or_else(|| {
                FormatError::new(line_no, column(line, at), FormatErrorKind::UnknownVertex(name.to_string()))
            })
        };
        let (a, b) = (lookup(u, u_at)?, lookup(v, v_at)?);
        if !inst.is_edge(a, b) {
            return Err(FormatError::new(
                line_no,
                column(line, u_at),
                FormatErrorKind::Invalid(Error::InvalidMatching { reason: "pair is not an edge" }),
            ));
        }
        if used[a] || used[b] {
            return Err(FormatError::new(
                line_no,
                column(line, u_at),
                FormatErrorKind::Invalid(Error::InvalidMatching { reason: "vertex matched twice" }),
            ));
        }
        used[a] = true;
        used[b] = true;
        pairs.push((a, b));
    }
    Ok(Matching::from_pairs(inst, &pairs).expect("pairs were checked line by line"))
}

pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    let mut out = String::from(MATCHING_HEADER);
    out.push('\n');
    for (u, v) in m.pairs() {
        let _ = writeln!(out, "{} - {}", inst.name(u), inst.name(v));
    }
    out
}

fn parse_number(line_no: usize, line: &str, at: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::syntax(line_no, column(line, at), "expected a non-negative integer"))
}

/// Parses a DIMACS-style vertex cover input: `p vc n m`, then `m` lines
/// `e i j` with 1-based endpoints. Lines starting with `c` or `#` are
/// comments.
pub fn parse_cover(text: &str) -> Result<CoverInstance, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 1;
    for (line_no, line) in content_lines(text) {
        last_line = line_no;
        let tokens: Vec<(usize, &str)> = line
            .split_whitespace()
            .map(|tok| (tok.as_ptr() as usize - line.as_ptr() as usize, tok))
            .collect();
        match tokens[0].1 {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(FormatError::syntax(line_no, column(line, tokens[0].0), "second problem line"));
                }
                let [_, (_, "vc"), (n_at, n), (m_at, m)] = tokens[..] else {
                    return Err(FormatError::syntax(line_no, column(line, tokens[0].0), "expected `p vc n m`"));
                };
                header = Some((
                    parse_number(line_no, line, n_at, n)?,
                    parse_number(line_no, line, m_at, m)?,
                    line_no,
                ));
            }
            "e" => {
                let Some((n, _, _)) = header else {
                    return Err(FormatError::syntax(line_no, column(line, tokens[0].0), "edge before `p vc` line"));
                };
                let [_, (i_at, i), (j_at, j)] = tokens[..] else {
                    return Err(FormatError::syntax(line_no, column(line, tokens[0].0), "expected `e i j`"));
                };
                let (i, j) = (parse_number(line_no, line, i_at, i)?, parse_number(line_no, line, j_at, j)?);
                for (x, at) in [(i, i_at), (j, j_at)] {
                    if x == 0 || x > n {
                        return Err(FormatError::syntax(line_no, column(line, at), "endpoint out of range"));
                    }
                }
                if i == j {
                    return Err(FormatError::syntax(line_no, column(line, i_at), "self-loop"));
                }
                edges.push((i, j));
            }
            _ => return Err(FormatError::syntax(line_no, column(line, tokens[0].0), "expected `p`, `e` or `c`")),
        }
    }
    let Some((n, m, p_line)) = header else {
        return Err(FormatError::new(last_line, 1, FormatErrorKind::MissingHeader("p vc n m")));
    };
    if edges.len() != m {
        return Err(FormatError::syntax(p_line, 1, "edge count differs from the `p vc` line"));
    }
    CoverInstance::new(n, &edges).map_err(|e| FormatError::new(p_line, 1, FormatErrorKind::Invalid(e)))
}

pub fn serialize_cover(cover: &CoverInstance) -> String {
    let mut out = format!("p vc {} {}\n", cover.num_vertices(), cover.edges().len());
    for &(i, j) in cover.edges() {
        let _ = writeln!(out, "e {i} {j}");
    }
    out
}
