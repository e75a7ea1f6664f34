//! Edge-list and JSON graph formats.
//!
//! Edge list: `#` comment lines and blank lines are ignored, the first
//! remaining line is `n m`, followed by exactly `m` lines `u v`. JSON: an
//! object `{"n": .., "edges": [[u, v], ..], "labels": {"id": "label", ..}}`
//! with `labels` optional. Serialization is canonical in both formats (edges
//! in lexicographic order, `u < v`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    EdgeList,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(Format::EdgeList),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

impl Format {
    /// Guesses the format from the first non-blank character.
    pub fn sniff(text: &str) -> Format {
        match text.trim_start().chars().next() {
            Some('{') => Format::Json,
            _ => Format::EdgeList,
        }
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Json => parse_json(text),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => to_edge_list(g),
        Format::Json => to_json(g),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(line_no, "expected two integers"))?;
        tok.parse()
            .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {tok:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens"));
    }
    Ok((a, b))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line \"n m\""))?;
    let (n, m) = parse_pair(header_no, header)?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last_line = header_no;
    for (line_no, line) in lines {
        last_line = line_no;
        if edges.len() == m {
            return Err(parse_err(line_no, format!("more than {m} edge lines")));
        }
        let (u, v) = parse_pair(line_no, line)?;
        if u >= n || v >= n {
            return Err(parse_err(
                line_no,
                format!("vertex out of range (n = {n}): {u} {v}"),
            ));
        }
        if u == v {
            return Err(parse_err(line_no, format!("self-loop at vertex {u}")));
        }
        let e = crate::graph::edge(u, v);
        if !seen.insert(e) {
            return Err(parse_err(
                line_no,
                format!("duplicate edge {} {}", e.0, e.1),
            ));
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<usize, String>,
}

fn parse_json(text: &str) -> Result<Graph> {
    let doc: JsonGraph =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    // JSON carries no per-edge line numbers; report the edge index instead.
    let mut seen = std::collections::HashSet::with_capacity(doc.edges.len());
    for (i, &[u, v]) in doc.edges.iter().enumerate() {
        let at = |msg: String| parse_err(1, format!("edges[{i}]: {msg}"));
        if u >= doc.n || v >= doc.n {
            return Err(at(format!("vertex out of range (n = {})", doc.n)));
        }
        if u == v {
            return Err(at(format!("self-loop at vertex {u}")));
        }
        if !seen.insert(crate::graph::edge(u, v)) {
            return Err(at(format!("duplicate edge {u} {v}")));
        }
    }
    if let Some(&v) = doc.labels.keys().find(|&&v| v >= doc.n) {
        return Err(parse_err(1, format!("label for unknown vertex {v}")));
    }
    Graph::new(doc.n, doc.edges.iter().map(|&[u, v]| (u, v)))?.with_labels(doc.labels)
}

fn to_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn to_json(g: &Graph) -> String {
    let doc = JsonGraph {
        n: g.n(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        labels: g.labels().clone(),
    };
    serde_json::to_string(&doc).expect("graph serialization cannot fail")
}
