//! Reading graphs, walk matrices and vertex sets from files or stdin.

use std::fs;
use std::io::{self, Read};

use clap::ValueEnum;
use walkmat::walk::{self, WalkMatrix, WalkMatrixJson};
use walkmat::{Graph, VertexSet};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Detect from content.
    Auto,
    Graph6,
    /// Header `n m`, then one `i j` line per edge (1-based).
    Edges,
    /// `n` lines of `n` 0/1 tokens.
    Matrix,
    /// Walk matrix: JSON document or integer rows under a `# set:` header.
    Walk,
}

/// What an input file holds: a graph, or only its walk matrix.
#[derive(Debug, Clone)]
pub enum Source {
    Graph(Graph),
    Walk(WalkMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    All,
    Labels(Vec<usize>),
}

pub fn read_path(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::data(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::data(format!("{path}: {e}")))
    }
}

pub fn load(path: &str, format: Format) -> Result<Source, CliError> {
    let text = read_path(path)?;
    parse(&text, format).map_err(|e| CliError::data(format!("{path}: {}", e.message)))
}

pub fn parse(text: &str, format: Format) -> Result<Source, CliError> {
    let format = match format {
        Format::Auto => detect(text),
        f => f,
    };
    let data = |e: &dyn std::fmt::Display| CliError::data(e.to_string());
    match format {
        Format::Graph6 => {
            let line = content_lines(text).next().unwrap_or("");
            let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
            Graph::parse_graph6(line).map(Source::Graph).map_err(|e| data(&e))
        }
        Format::Edges => Graph::parse_edge_list(text).map(Source::Graph).map_err(|e| data(&e)),
        Format::Matrix => Graph::parse_adjacency_text(text).map(Source::Graph).map_err(|e| data(&e)),
        Format::Walk => parse_walk(text).map(Source::Walk),
        Format::Auto => unreachable!("resolved above"),
    }
}

fn parse_walk(text: &str) -> Result<WalkMatrix, CliError> {
    if text.trim_start().starts_with('{') {
        let doc: WalkMatrixJson = serde_json::from_str(text).map_err(|e| CliError::data(e.to_string()))?;
        WalkMatrix::from_json(&doc).map_err(|e| CliError::data(e.to_string()))
    } else {
        WalkMatrix::parse_text(text).map_err(|e| CliError::data(e.to_string()))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// JSON or a `# set:` header means a walk matrix, and a lone token means graph6.
/// A square block is an adjacency matrix when all 0/1, a walk matrix when only
/// its first column is; anything else is an edge list.
pub fn detect(text: &str) -> Format {
    if text.trim_start().starts_with('{') || text.lines().any(|l| l.trim().starts_with("# set:")) {
        return Format::Walk;
    }
    let rows: Vec<Vec<&str>> = content_lines(text).map(|l| l.split_whitespace().collect()).collect();
    match rows.as_slice() {
        [only] if only.len() == 1 && only[0] != "0" => Format::Graph6,
        _ if !rows.is_empty() && rows.iter().all(|r| r.len() == rows.len()) => {
            let binary = |t: &&str| *t == "0" || *t == "1";
            if rows.iter().flatten().all(binary) {
                Format::Matrix
            } else if rows.iter().all(|r| binary(&r[0])) {
                Format::Walk
            } else {
                Format::Edges
            }
        }
        _ => Format::Edges,
    }
}

/// `V`, a comma list of 1-based labels, or `@file` holding either.
pub fn parse_set(spec: &str) -> Result<SetSpec, CliError> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let text = read_path(path)?;
        let joined: Vec<&str> = content_lines(&text).collect();
        return parse_set(&joined.join(","));
    }
    if spec.eq_ignore_ascii_case("v") {
        return Ok(SetSpec::All);
    }
    let labels = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_start_matches('v').parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::data(format!("bad vertex set `{spec}`")))?;
    if labels.is_empty() {
        return Err(CliError::data("vertex set is empty"));
    }
    Ok(SetSpec::Labels(labels))
}

impl SetSpec {
    pub fn resolve(&self, n: usize) -> Result<VertexSet, CliError> {
        match self {
            SetSpec::All => Ok(VertexSet::all(n)),
            SetSpec::Labels(l) => VertexSet::from_one_based(n, l).map_err(|e| CliError::data(e.to_string())),
        }
    }
}

impl Source {
    /// `W^S` of a graph, or the stored matrix, whose set must agree with an explicit `set`.
    pub fn walk(&self, set: Option<&SetSpec>) -> Result<WalkMatrix, CliError> {
        match self {
            Source::Graph(g) => {
                let s = set.unwrap_or(&SetSpec::All).resolve(g.order())?;
                walk::walk_matrix(g, &s).map_err(|e| CliError::data(e.to_string()))
            }
            Source::Walk(w) => {
                if let Some(spec) = set {
                    if &spec.resolve(w.order())? != w.set() {
                        return Err(CliError::data("--set disagrees with the set of the walk matrix"));
                    }
                }
                Ok(w.clone())
            }
        }
    }

    pub fn graph(&self) -> Result<&Graph, CliError> {
        match self {
            Source::Graph(g) => Ok(g),
            Source::Walk(_) => Err(CliError::data("this command needs a graph, not a walk matrix")),
        }
    }
}
