//! Undirected weighted graphs with dense node ids.
//!
//! Self-loops are allowed; aggregated levels of a hierarchy carry the
//! internal weight of each community on a loop. A loop of weight `w`
//! contributes `2w` to its node's weighted degree and `w` to the total
//! weight `m`, so that `m == sum(k_i) / 2` holds for every graph.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use crate::error::{parse_err, Error, Result};

/// Upper bound on a `# nodes N` header, so a corrupt file cannot request an
/// arbitrarily large allocation.
pub const MAX_DECLARED_NODES: usize = 1 << 24;

/// One undirected edge, stored with `u <= v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    /// Neighbor lists sorted by neighbor id. A self-loop appears once.
    adjacency: Vec<Vec<(usize, f64)>>,
    edges: Vec<Edge>,
    degrees: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Reversed and repeated pairs
    /// are merged by summing their weights.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        for (u, v, w) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node,
                        count: node_count,
                    });
                }
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }

        let mut edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        edges.sort_unstable_by_key(|e| (e.u, e.v));

        let mut adjacency = vec![Vec::new(); node_count];
        let mut degrees = vec![0.0; node_count];
        for e in &edges {
            if e.is_loop() {
                adjacency[e.u].push((e.u, e.weight));
                degrees[e.u] += 2.0 * e.weight;
            } else {
                adjacency[e.u].push((e.v, e.weight));
                adjacency[e.v].push((e.u, e.weight));
                degrees[e.u] += e.weight;
                degrees[e.v] += e.weight;
            }
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|&(n, _)| n);
        }
        if !degrees.iter().sum::<f64>().is_finite() {
            return Err(Error::InvalidParameter(
                "edge weights overflow when summed".into(),
            ));
        }

        Ok(Graph {
            adjacency,
            edges,
            degrees,
            labels: None,
        })
    }

    /// Attaches original string identifiers, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::SizeMismatch {
                expected: self.node_count(),
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of distinct edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn non_loop_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_loop()).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    /// `k_i`, with self-loops counted twice.
    pub fn weighted_degree(&self, node: usize) -> Result<f64> {
        self.check_node(node)?;
        Ok(self.degrees[node])
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn self_loop(&self, node: usize) -> f64 {
        self.edge_weight(node, node).unwrap_or(0.0)
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|idx| list[idx].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_weight(u, v).is_some()
    }

    /// `m`: non-loop edges counted once, self-loops counted once.
    pub fn total_weight(&self) -> Result<f64> {
        let m: f64 = self.edges.iter().map(|e| e.weight).sum();
        if m > 0.0 {
            Ok(m)
        } else {
            Err(Error::ZeroTotalWeight)
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Original identifier of a node, or its dense id when unlabeled.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    pub(crate) fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                count: self.node_count(),
            })
        }
    }
}

fn parse_weight(token: &str, line: usize) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("weight `{token}` is not a number")))?;
    if !w.is_finite() {
        return Err(parse_err(line, format!("weight `{token}` is not finite")));
    }
    if w < 0.0 {
        return Err(parse_err(line, format!("negative weight {w}")));
    }
    Ok(w)
}

/// Splits a data line into `(u, v, weight?)`, or `None` for blanks and
/// comments.
fn split_line(raw: &str, line: usize) -> Result<Option<(&str, &str, Option<&str>)>> {
    let trimmed = raw.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens: Vec<&str> = trimmed.split_whitespace().collect();
    match tokens.as_slice() {
        [u, v] => Ok(Some((u, v, None))),
        [u, v, w] => Ok(Some((u, v, Some(w)))),
        _ => Err(parse_err(
            line,
            format!("expected 2 or 3 tokens, found {}", tokens.len()),
        )),
    }
}

/// Parses a whitespace-separated edge list (`u v` or `u v w` per line).
///
/// Node tokens are arbitrary strings mapped to dense ids in order of first
/// appearance; the original tokens are kept as labels.
pub fn load_edge_list(text: &str, default_weight: f64) -> Result<Graph> {
    read_edge_list(text.as_bytes(), default_weight)
}

pub fn read_edge_list<R: BufRead>(reader: R, default_weight: f64) -> Result<Graph> {
    if !default_weight.is_finite() || default_weight < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "default weight must be a finite non-negative number, got {default_weight}"
        )));
    }
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut triples = Vec::new();

    let mut intern = |token: &str| -> usize {
        if let Some(&id) = ids.get(token) {
            return id;
        }
        let id = labels.len();
        ids.insert(token.to_owned(), id);
        labels.push(token.to_owned());
        id
    };

    for (idx, raw) in reader.lines().enumerate() {
        let raw = raw?;
        let line = idx + 1;
        let Some((u, v, w)) = split_line(&raw, line)? else {
            continue;
        };
        let weight = match w {
            Some(tok) => parse_weight(tok, line)?,
            None => default_weight,
        };
        let (u, v) = (intern(u), intern(v));
        triples.push((u, v, weight));
    }

    if triples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Graph::from_edges(labels.len(), triples)?.with_labels(labels)
}

/// Parses an edge list whose node tokens are already dense integer ids.
///
/// An optional `# nodes N` comment fixes the node count, so isolated nodes
/// survive a write/read cycle. This is the format used for compressed
/// hierarchy levels.
pub fn parse_indexed_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut max_id: Option<usize> = None;
    let mut triples = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if let Some(rest) = raw.trim().strip_prefix("# nodes") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(line, "malformed `# nodes` header"))?;
            if n > MAX_DECLARED_NODES {
                return Err(parse_err(
                    line,
                    format!("declared node count {n} exceeds {MAX_DECLARED_NODES}"),
                ));
            }
            declared = Some(n);
            continue;
        }
        let Some((u, v, w)) = split_line(raw, line)? else {
            continue;
        };
        let parse_id = |tok: &str| -> Result<usize> {
            tok.parse()
                .map_err(|_| parse_err(line, format!("node id `{tok}` is not an integer")))
        };
        let (u, v) = (parse_id(u)?, parse_id(v)?);
        let weight = match w {
            Some(tok) => parse_weight(tok, line)?,
            None => 1.0,
        };
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        triples.push((u, v, weight));
    }

    let needed = max_id.map_or(0, |m| m + 1);
    let node_count = match declared {
        Some(n) if n < needed => {
            return Err(Error::NodeOutOfRange {
                node: needed - 1,
                count: n,
            })
        }
        Some(n) => n,
        None => needed,
    };
    if node_count == 0 {
        return Err(Error::EmptyInput);
    }
    Graph::from_edges(node_count, triples)
}

/// Writes `u v w` lines. With `use_labels`, nodes are written by their
/// original identifiers; otherwise by dense id under a `# nodes N` header.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W, use_labels: bool) -> io::Result<()> {
    if !use_labels {
        writeln!(out, "# nodes {}", g.node_count())?;
    }
    for e in g.edges() {
        if use_labels {
            let (mut a, mut b) = (g.label(e.u), g.label(e.v));
            // A line must not start with the comment marker.
            if a.starts_with('#') {
                std::mem::swap(&mut a, &mut b);
            }
            writeln!(out, "{a} {b} {}", e.weight)?;
        } else {
            writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
        }
    }
    Ok(())
}

/// Graphviz output, one `--` edge per line with the weight as an attribute.
pub fn write_dot<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "graph G {{")?;
    for node in 0..g.node_count() {
        writeln!(out, "  {node} [label=\"{}\"];", escape_dot(&g.label(node)))?;
    }
    for e in g.edges() {
        writeln!(out, "  {} -- {} [weight={}];", e.u, e.v, e.weight)?;
    }
    writeln!(out, "}}")
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
