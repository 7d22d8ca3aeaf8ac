//! Seeded random graphs with planted community structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Stochastic block model with unit weights: nodes in the same block are
/// linked with probability `p_in`, others with `p_out`.
pub fn planted_partition(block_sizes: &[usize], p_in: f64, p_out: f64, seed: u64) -> Graph {
    let block: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &size)| std::iter::repeat(b).take(size))
        .collect();
    sample_pairs(block.len(), seed, |u, v| {
        if block[u] == block[v] {
            p_in
        } else {
            p_out
        }
    })
}

/// Two-level planted partition and the blocks each node was planted in.
#[derive(Debug, Clone)]
pub struct NestedPlanted {
    pub graph: Graph,
    pub sub_block: Vec<usize>,
    pub super_block: Vec<usize>,
}

/// `supers` super-blocks of `subs` sub-blocks of `size` nodes each. Pairs
/// share a sub-block with edge probability `p_sub`, only a super-block with
/// `p_super`, and nothing with `p_across`.
pub fn nested_planted_partition(
    supers: usize,
    subs: usize,
    size: usize,
    p_sub: f64,
    p_super: f64,
    p_across: f64,
    seed: u64,
) -> NestedPlanted {
    let n = supers * subs * size;
    let sub_block: Vec<usize> = (0..n).map(|i| i / size).collect();
    let super_block: Vec<usize> = (0..n).map(|i| i / (size * subs)).collect();
    let graph = sample_pairs(n, seed, |u, v| {
        if sub_block[u] == sub_block[v] {
            p_sub
        } else if super_block[u] == super_block[v] {
            p_super
        } else {
            p_across
        }
    });
    NestedPlanted {
        graph,
        sub_block,
        super_block,
    }
}

/// G(n, p) with unit weights.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    sample_pairs(n, seed, |_, _| p)
}

fn sample_pairs(n: usize, seed: u64, prob: impl Fn(usize, usize) -> f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < prob(u, v) {
                edges.push((u, v, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_density() {
        let g = planted_partition(&[40, 40], 0.5, 0.0, 3);
        assert_eq!(g.node_count(), 80);
        assert!(g.edges().iter().all(|e| (e.u < 40) == (e.v < 40)));
        let expected = 2.0 * 0.5 * (40.0 * 39.0 / 2.0);
        assert!((g.edge_count() as f64 - expected).abs() < 0.15 * expected);
    }

    #[test]
    fn nested_labels() {
        let p = nested_planted_partition(2, 3, 4, 1.0, 0.0, 0.0, 0);
        assert_eq!(p.graph.node_count(), 24);
        assert_eq!(p.sub_block[5], 1);
        assert_eq!(p.super_block[13], 1);
        // Only complete sub-blocks: 6 * C(4, 2).
        assert_eq!(p.graph.edge_count(), 36);
    }

    #[test]
    fn seeded() {
        assert_eq!(erdos_renyi(30, 0.2, 7), erdos_renyi(30, 0.2, 7));
        assert_ne!(erdos_renyi(30, 0.2, 7), erdos_renyi(30, 0.2, 8));
    }
}
