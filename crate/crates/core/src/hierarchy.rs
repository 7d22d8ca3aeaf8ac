//! Recursive community compression of a graph into coarser levels.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{parse_err, Error, Result};
use crate::graph::{parse_indexed_edge_list, write_edge_list, Graph};
use crate::louvain::{modularity_optimization, node_aggregation, Partition};

/// Graphs `G^0 .. G^K` with the maps linking consecutive levels.
///
/// `memberships[k][i]` is the node of `G^{k+1}` that node `i` of `G^k`
/// was collapsed into.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    graphs: Vec<Graph>,
    memberships: Vec<Vec<usize>>,
}

impl Hierarchy {
    /// A hierarchy with only the input level.
    pub fn single(g: Graph) -> Self {
        Hierarchy {
            graphs: vec![g],
            memberships: Vec::new(),
        }
    }

    /// Builds the coarse levels from explicit per-level community labels.
    /// Labels are re-densified, so any `usize` values are accepted.
    pub fn from_memberships(g: Graph, memberships: &[Vec<usize>]) -> Result<Self> {
        let mut h = Hierarchy::single(g);
        for labels in memberships {
            let top = h.graphs.last().unwrap();
            let p = Partition::from_assignment(top, labels)?;
            let (coarse, membership) = node_aggregation(top, &p)?;
            h.graphs.push(coarse);
            h.memberships.push(membership);
        }
        Ok(h)
    }

    /// Number of compression steps actually performed (`K` when no early stop).
    pub fn achieved_levels(&self) -> usize {
        self.memberships.len()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn graph(&self, level: usize) -> Option<&Graph> {
        self.graphs.get(level)
    }

    pub fn memberships(&self) -> &[Vec<usize>] {
        &self.memberships
    }

    pub fn base(&self) -> &Graph {
        &self.graphs[0]
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }

    /// Writes `level{k}.edges` for every level and `membership{k}.txt` for
    /// every map. Original labels of level 0, if any, go to `level0.labels`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (k, g) in self.graphs.iter().enumerate() {
            let mut out =
                io::BufWriter::new(fs::File::create(dir.join(format!("level{k}.edges")))?);
            write_edge_list(g, &mut out, false)?;
            out.flush()?;
        }
        for (k, map) in self.memberships.iter().enumerate() {
            let mut out =
                io::BufWriter::new(fs::File::create(dir.join(format!("membership{k}.txt")))?);
            write_membership(map, &mut out)?;
            out.flush()?;
        }
        if let Some(labels) = self.base().labels() {
            let mut out = io::BufWriter::new(fs::File::create(dir.join("level0.labels"))?);
            for (id, label) in labels.iter().enumerate() {
                writeln!(out, "{id} {label}")?;
            }
            out.flush()?;
        }
        Ok(())
    }

    /// Inverse of [`Hierarchy::write_to_dir`]. Checks that each membership
    /// map is consistent with the stored coarse level.
    pub fn read_from_dir(dir: &Path) -> Result<Self> {
        let mut graphs = Vec::new();
        for k in 0.. {
            let path = dir.join(format!("level{k}.edges"));
            if !path.exists() {
                break;
            }
            graphs.push(parse_indexed_edge_list(&fs::read_to_string(path)?)?);
        }
        if graphs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let labels_path = dir.join("level0.labels");
        if labels_path.exists() {
            let labels = parse_labels(&fs::read_to_string(labels_path)?, graphs[0].node_count())?;
            graphs[0] = graphs[0].clone().with_labels(labels)?;
        }

        let mut memberships = Vec::new();
        for k in 0..graphs.len() - 1 {
            let map =
                parse_membership(&fs::read_to_string(dir.join(format!("membership{k}.txt")))?)?;
            if map.len() != graphs[k].node_count() {
                return Err(Error::SizeMismatch {
                    expected: graphs[k].node_count(),
                    actual: map.len(),
                });
            }
            let p = Partition::from_assignment(&graphs[k], &map)?;
            let (coarse, dense) = node_aggregation(&graphs[k], &p)?;
            if dense != map || coarse.node_count() != graphs[k + 1].node_count() {
                return Err(Error::InvalidParameter(format!(
                    "membership{k}.txt does not match level{}.edges",
                    k + 1
                )));
            }
            memberships.push(map);
        }
        Ok(Hierarchy {
            graphs,
            memberships,
        })
    }
}

/// Repeats modularity optimization and node aggregation up to `levels`
/// times. Stops early when a level no longer shrinks, or when the current
/// level carries no edge weight.
///
/// Level `k` is optimized with seed `seed + k`.
pub fn hierarchical_sampling(g: &Graph, levels: usize, seed: u64) -> Result<Hierarchy> {
    let mut h = Hierarchy::single(g.clone());
    for k in 0..levels {
        let top = h.graphs.last().unwrap();
        if top.total_weight().is_err() {
            break;
        }
        let p = modularity_optimization(top, seed.wrapping_add(k as u64))?;
        let (coarse, membership) = node_aggregation(top, &p)?;
        if coarse.node_count() == top.node_count() {
            break;
        }
        h.graphs.push(coarse);
        h.memberships.push(membership);
    }
    Ok(h)
}

pub fn write_membership<W: Write>(map: &[usize], mut out: W) -> io::Result<()> {
    for (node, community) in map.iter().enumerate() {
        writeln!(out, "{node} {community}")?;
    }
    Ok(())
}

/// Parses `node_id community_id` lines. Every node id in `0..n` must occur
/// exactly once; `#` lines are comments.
pub fn parse_membership(text: &str) -> Result<Vec<usize>> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [node, community] = tokens.as_slice() else {
            return Err(parse_err(
                line,
                format!("expected 2 tokens, found {}", tokens.len()),
            ));
        };
        let parse = |tok: &str| -> Result<usize> {
            tok.parse()
                .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))
        };
        pairs.push((parse(node)?, parse(community)?));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = pairs.len();
    let mut map = vec![usize::MAX; n];
    for (line_idx, &(node, community)) in pairs.iter().enumerate() {
        if node >= n {
            return Err(Error::NodeOutOfRange { node, count: n });
        }
        if map[node] != usize::MAX {
            return Err(Error::InvalidParameter(format!(
                "node {node} assigned twice (entry {})",
                line_idx + 1
            )));
        }
        map[node] = community;
    }
    Ok(map)
}

fn parse_labels(text: &str, n: usize) -> Result<Vec<String>> {
    let mut labels = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (id, label) = raw
            .trim()
            .split_once(' ')
            .ok_or_else(|| parse_err(line, "expected `id label`"))?;
        let id: usize = id
            .parse()
            .map_err(|_| parse_err(line, format!("`{id}` is not a node id")))?;
        if id >= n {
            return Err(Error::NodeOutOfRange { node: id, count: n });
        }
        labels[id] = Some(label.to_owned());
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(id, l)| l.ok_or_else(|| Error::InvalidParameter(format!("node {id} has no label"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::louvain::modularity;

    fn two_triangles() -> Graph {
        Graph::from_edges(
            6,
            [
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn zero_levels_keeps_input() {
        let g = two_triangles();
        let h = hierarchical_sampling(&g, 0, 1).unwrap();
        assert_eq!(h.achieved_levels(), 0);
        assert_eq!(h.graphs(), &[g]);
    }

    #[test]
    fn triangles_stop_after_one_level() {
        // The 2-node coarse graph has Q = 5/14 as singletons and 0 merged,
        // so the second optimization leaves it alone and sampling stops.
        let g = two_triangles();
        let coarse = hierarchical_sampling(&g, 1, 0).unwrap().graphs()[1].clone();
        let merged = Partition::from_assignment(&coarse, &[0, 0]).unwrap();
        assert!(
            modularity(&coarse, &merged).unwrap()
                < modularity(&coarse, &Partition::singletons(&coarse)).unwrap()
        );

        for seed in 0..10 {
            let h = hierarchical_sampling(&g, 3, seed).unwrap();
            assert_eq!(h.achieved_levels(), 1);
            assert_eq!(h.graphs()[1].node_count(), 2);
            assert_eq!(h.memberships()[0][0], h.memberships()[0][1]);
            assert_eq!(h.memberships()[0][0], h.memberships()[0][2]);
        }
    }

    #[test]
    fn edgeless_graph_does_not_compress() {
        let g = Graph::from_edges(3, []).unwrap();
        let h = hierarchical_sampling(&g, 3, 0).unwrap();
        assert_eq!(h.achieved_levels(), 0);
    }

    #[test]
    fn complete_graph_collapses_to_one_node() {
        let edges: Vec<_> = (0..4)
            .flat_map(|u| ((u + 1)..4).map(move |v| (u, v, 1.0)))
            .collect();
        let g = Graph::from_edges(4, edges).unwrap();
        let h = hierarchical_sampling(&g, 3, 0).unwrap();
        assert_eq!(h.achieved_levels(), 1);
        assert_eq!(h.graphs()[1].node_count(), 1);
        assert_eq!(h.graphs()[1].self_loop(0), 6.0);
    }

    #[test]
    fn membership_parse_errors() {
        assert_eq!(parse_membership("1 0\n0 0\n").unwrap(), vec![0, 0]);
        assert!(matches!(parse_membership(""), Err(Error::EmptyInput)));
        assert!(matches!(
            parse_membership("0 0 0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_membership("0 -1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_membership("0 0\n0 1\n").is_err());
        assert!(parse_membership("0 0\n5 1\n").is_err());
    }

    #[test]
    fn from_memberships_matches_sampling() {
        let g = two_triangles();
        let sampled = hierarchical_sampling(&g, 3, 4).unwrap();
        let rebuilt = Hierarchy::from_memberships(g, sampled.memberships()).unwrap();
        assert_eq!(rebuilt, sampled);
    }
}
