use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Train/test division of a graph's edges. Self-loops always stay in
/// training; only edges between distinct nodes are held out.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    pub train_graph: Graph,
    pub test_positives: Vec<(usize, usize)>,
    pub seed: u64,
    pub ratio: f64,
}

/// Holds out `round((1 - ratio) * |E|)` uniformly chosen edges. The training
/// graph keeps every node, including ones left isolated.
pub fn split_edges(g: &Graph, ratio: f64, seed: u64) -> Result<EdgeSplit> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "split ratio must lie strictly between 0 and 1, got {ratio}"
        )));
    }
    let mut candidates: Vec<usize> = (0..g.edge_count())
        .filter(|&i| !g.edges()[i].is_loop())
        .collect();
    let test_count = ((1.0 - ratio) * candidates.len() as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);

    let held_out: HashSet<usize> = candidates[..test_count].iter().copied().collect();
    let mut test_positives: Vec<(usize, usize)> = candidates[..test_count]
        .iter()
        .map(|&i| (g.edges()[i].u, g.edges()[i].v))
        .collect();
    test_positives.sort_unstable();

    let train_edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !held_out.contains(i))
        .map(|(_, e)| (e.u, e.v, e.weight));
    let mut train_graph = Graph::from_edges(g.node_count(), train_edges)?;
    if let Some(labels) = g.labels() {
        train_graph = train_graph.with_labels(labels.to_vec())?;
    }
    Ok(EdgeSplit {
        train_graph,
        test_positives,
        seed,
        ratio,
    })
}

/// `count` distinct unordered pairs `(u, v)`, `u < v`, that are not edges of
/// `g`, drawn uniformly.
pub fn sample_negative_pairs(g: &Graph, count: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let n = g.node_count();
    let all_pairs = n * n.saturating_sub(1) / 2;
    let available = all_pairs - g.non_loop_edge_count();
    if count > available {
        return Err(Error::InvalidParameter(format!(
            "asked for {count} non-edges but the graph only has {available}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if available <= 4 * count {
        // Dense regime: enumerate the complement and choose from it.
        let mut pool: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        pool.shuffle(&mut rng);
        pool.truncate(count);
        return Ok(pool);
    }

    let mut chosen = HashSet::with_capacity(count);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if g.has_edge(pair.0, pair.1) || !chosen.insert(pair) {
            continue;
        }
        pairs.push(pair);
    }
    Ok(pairs)
}
