//! Edge lists and ordering files.
//!
//! An edge list holds one whitespace-separated token pair per line; `#`
//! starts a comment. Tokens are arbitrary strings and get dense ids in
//! first-seen order. An ordering file lists every token once, one per line.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{Graph, LinearGraph};

/// A graph together with the token naming each vertex.
#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub graph: Graph,
    pub names: Vec<String>,
}

impl NamedGraph {
    pub fn index(&self) -> HashMap<&str, usize> {
        self.names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_edge_list(text: &str) -> Result<NamedGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut dups = 0usize;
    for (no, line) in text.lines().enumerate() {
        let line = content(line);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = toks[..] else {
            return Err(Error::Input(format!("line {}: expected two tokens, found {}", no + 1, toks.len())));
        };
        if a == b {
            return Err(Error::Input(format!("line {}: self-loop on {a:?}", no + 1)));
        }
        let mut id = |t: &str| {
            *ids.entry(t.to_string()).or_insert_with(|| {
                names.push(t.to_string());
                names.len() - 1
            })
        };
        let (u, v) = (id(a), id(b));
        if seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        } else {
            dups += 1;
        }
    }
    if dups > 0 {
        warn!("ignored {dups} duplicate edge(s)");
    }
    let graph = Graph::from_edges(names.len(), &edges)?;
    Ok(NamedGraph { graph, names })
}

pub fn read_edge_list(path: &Path) -> Result<NamedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text)
}

pub fn write_edge_list(g: &NamedGraph) -> String {
    let mut out = String::new();
    for (u, v) in g.graph.edges() {
        let _ = writeln!(out, "{} {}", g.names[u], g.names[v]);
    }
    out
}

/// Reads an ordering of `g`'s vertices; every token must appear exactly once.
pub fn parse_ordering(text: &str, g: &NamedGraph) -> Result<LinearGraph> {
    let index = g.index();
    let mut order = Vec::with_capacity(g.names.len());
    for (no, line) in text.lines().enumerate() {
        let tok = content(line);
        if tok.is_empty() {
            continue;
        }
        let &v = index
            .get(tok)
            .ok_or_else(|| Error::Input(format!("line {}: unknown vertex {tok:?}", no + 1)))?;
        order.push(v);
    }
    LinearGraph::from_order(g.graph.clone(), order)
}

pub fn read_ordering(path: &Path, g: &NamedGraph) -> Result<LinearGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_ordering(&text, g)
}

pub fn write_ordering(lg: &LinearGraph, names: &[String]) -> String {
    let mut out = String::new();
    for v in lg.order() {
        out.push_str(&names[v]);
        out.push('\n');
    }
    out
}
