//! Modularity, local-move optimization and community aggregation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A sweep whose accepted moves gain less than this in total ends the
/// optimization phase.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-7;

/// Hard cap on sweeps, in case gains keep trickling in above the threshold.
const MAX_SWEEPS: usize = 1_000;

/// Gains within this margin of staying put are treated as ties.
const MOVE_EPSILON: f64 = 1e-13;

/// Assignment of nodes to communities, plus per-community aggregates kept in
/// sync by [`Partition::move_node`].
///
/// `internal_weight` counts each intra-community edge once, self-loops
/// included once, so that `Q = sum_c internal_c / m - (total_c / 2m)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    total_degree: Vec<f64>,
    internal_weight: Vec<f64>,
}

impl Partition {
    pub fn singletons(g: &Graph) -> Self {
        let n = g.node_count();
        Partition {
            assignment: (0..n).collect(),
            total_degree: g.degrees().to_vec(),
            internal_weight: (0..n).map(|i| g.self_loop(i)).collect(),
        }
    }

    /// Builds a partition from arbitrary labels; ids are re-densified in
    /// order of first appearance.
    pub fn from_assignment(g: &Graph, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != g.node_count() {
            return Err(Error::SizeMismatch {
                expected: g.node_count(),
                actual: assignment.len(),
            });
        }
        let dense = densify(assignment);
        let communities = dense.iter().max().map_or(0, |&c| c + 1);
        let (total_degree, internal_weight) = aggregates(g, &dense, communities);
        Ok(Partition {
            assignment: dense,
            total_degree,
            internal_weight,
        })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community(&self, node: usize) -> usize {
        self.assignment[node]
    }

    /// Number of community slots, including ones emptied by moves.
    pub fn slot_count(&self) -> usize {
        self.total_degree.len()
    }

    /// Number of non-empty communities.
    pub fn community_count(&self) -> usize {
        let mut seen = vec![false; self.slot_count()];
        self.assignment.iter().for_each(|&c| seen[c] = true);
        seen.into_iter().filter(|&s| s).count()
    }

    pub fn total_degree(&self, community: usize) -> f64 {
        self.total_degree[community]
    }

    pub fn internal_weight(&self, community: usize) -> f64 {
        self.internal_weight[community]
    }

    pub fn total_degrees(&self) -> &[f64] {
        &self.total_degree
    }

    pub fn internal_weights(&self) -> &[f64] {
        &self.internal_weight
    }

    /// Moves `node` into community slot `to`, updating the cached aggregates.
    pub fn move_node(&mut self, g: &Graph, node: usize, to: usize) -> Result<()> {
        g.check_node(node)?;
        if self.len() != g.node_count() {
            return Err(Error::SizeMismatch {
                expected: g.node_count(),
                actual: self.len(),
            });
        }
        if to >= self.slot_count() {
            return Err(Error::InvalidParameter(format!(
                "community {to} does not exist ({} slots)",
                self.slot_count()
            )));
        }
        let from = self.assignment[node];
        let (mut to_from, mut to_target) = (0.0, 0.0);
        for &(j, w) in g.neighbors(node) {
            if j == node {
                continue;
            }
            let c = self.assignment[j];
            if c == from {
                to_from += w;
            }
            if c == to {
                to_target += w;
            }
        }
        self.apply_move(g, node, to, to_from, to_target);
        Ok(())
    }

    /// `to_from` / `to_target`: weight from `node` to the other members of
    /// its current and destination communities, self-loop excluded.
    fn apply_move(&mut self, g: &Graph, node: usize, to: usize, to_from: f64, to_target: f64) {
        let from = self.assignment[node];
        if from == to {
            return;
        }
        let k = g.degrees()[node];
        let self_loop = g.self_loop(node);
        self.total_degree[from] -= k;
        self.internal_weight[from] -= to_from + self_loop;
        self.total_degree[to] += k;
        self.internal_weight[to] += to_target + self_loop;
        self.assignment[node] = to;
    }

    /// Drops empty slots and renumbers communities densely in order of first
    /// appearance.
    pub fn compact(&mut self) {
        let mut remap = vec![usize::MAX; self.slot_count()];
        let mut next = 0;
        for &c in &self.assignment {
            if remap[c] == usize::MAX {
                remap[c] = next;
                next += 1;
            }
        }
        let mut total = vec![0.0; next];
        let mut internal = vec![0.0; next];
        for (old, &new) in remap.iter().enumerate() {
            if new != usize::MAX {
                total[new] = self.total_degree[old];
                internal[new] = self.internal_weight[old];
            }
        }
        for c in &mut self.assignment {
            *c = remap[*c];
        }
        self.total_degree = total;
        self.internal_weight = internal;
    }
}

fn densify(labels: &[usize]) -> Vec<usize> {
    let mut ids = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}

fn aggregates(g: &Graph, assignment: &[usize], communities: usize) -> (Vec<f64>, Vec<f64>) {
    let mut total = vec![0.0; communities];
    let mut internal = vec![0.0; communities];
    for (node, &c) in assignment.iter().enumerate() {
        total[c] += g.degrees()[node];
    }
    for e in g.edges() {
        if assignment[e.u] == assignment[e.v] {
            internal[assignment[e.u]] += e.weight;
        }
    }
    (total, internal)
}

/// Newman-Girvan modularity of `p` on `g`.
///
/// Aggregates are recomputed from the assignment, so a partition built for a
/// different graph of the same size is still scored correctly.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::SizeMismatch {
            expected: g.node_count(),
            actual: p.len(),
        });
    }
    let m = g.total_weight()?;
    let (total, internal) = aggregates(g, p.assignment(), p.slot_count());
    let two_m = 2.0 * m;
    Ok(total
        .iter()
        .zip(&internal)
        .map(|(&tot, &inside)| inside / m - (tot / two_m) * (tot / two_m))
        .sum())
}

/// One accepted local move, reported to optimization observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveRecord {
    pub node: usize,
    pub from: usize,
    pub to: usize,
    /// Modularity change predicted from cached aggregates.
    pub gain: f64,
}

/// Local-move modularity maximization starting from singletons.
pub fn modularity_optimization(g: &Graph, seed: u64) -> Result<Partition> {
    modularity_optimization_observed(g, seed, |_, _| {})
}

/// Like [`modularity_optimization`], calling `observer` after every
/// accepted move with the partition in its post-move state.
pub fn modularity_optimization_observed<F>(
    g: &Graph,
    seed: u64,
    mut observer: F,
) -> Result<Partition>
where
    F: FnMut(&MoveRecord, &Partition),
{
    let m = g.total_weight()?;
    let n = g.node_count();
    let mut p = Partition::singletons(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();

    // Scratch: weight from the current node to each neighboring community.
    let mut link = vec![0.0; n];
    let mut touched = vec![false; n];
    let mut candidates: Vec<usize> = Vec::new();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut sweep_gain = 0.0;

        for &node in &order {
            let k = g.degrees()[node];
            let own = p.assignment[node];

            for &(j, w) in g.neighbors(node) {
                if j == node {
                    continue;
                }
                let c = p.assignment[j];
                if !touched[c] {
                    touched[c] = true;
                    candidates.push(c);
                }
                link[c] += w;
            }
            candidates.sort_unstable();

            let scale = k / (2.0 * m * m);
            let stay = link[own] / m - (p.total_degree[own] - k) * scale;
            let mut best = own;
            let mut best_gain = f64::NEG_INFINITY;
            for &c in &candidates {
                if c == own {
                    continue;
                }
                let gain = link[c] / m - p.total_degree[c] * scale;
                if gain > best_gain {
                    best_gain = gain;
                    best = c;
                }
            }

            if best != own && best_gain - stay > MOVE_EPSILON {
                let delta = best_gain - stay;
                p.apply_move(g, node, best, link[own], link[best]);
                sweep_gain += delta;
                observer(
                    &MoveRecord {
                        node,
                        from: own,
                        to: best,
                        gain: delta,
                    },
                    &p,
                );
            }

            for &c in &candidates {
                link[c] = 0.0;
                touched[c] = false;
            }
            candidates.clear();
        }

        if sweep_gain < CONVERGENCE_THRESHOLD {
            break;
        }
    }

    p.compact();
    Ok(p)
}

/// Collapses each community of `p` into one node. Crossing weights are
/// summed into edges and internal weight becomes a self-loop. Returns the
/// coarse graph and the node-to-community map.
pub fn node_aggregation(g: &Graph, p: &Partition) -> Result<(Graph, Vec<usize>)> {
    if p.len() != g.node_count() {
        return Err(Error::SizeMismatch {
            expected: g.node_count(),
            actual: p.len(),
        });
    }
    let membership = densify(p.assignment());
    let communities = membership.iter().max().map_or(0, |&c| c + 1);
    let coarse = Graph::from_edges(
        communities,
        g.edges()
            .iter()
            .map(|e| (membership[e.u], membership[e.v], e.weight)),
    )?;
    Ok((coarse, membership))
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn one_community_scores_zero() {
        let g = two_triangles();
        let p = Partition::from_assignment(&g, &[0; 6]).unwrap();
        assert!(modularity(&g, &p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn single_edge_singletons() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let q = modularity(&g, &Partition::singletons(&g)).unwrap();
        assert!((q + 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_split_is_five_fourteenths() {
        let g = two_triangles();
        let p = Partition::from_assignment(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!((modularity(&g, &p).unwrap() - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = two_triangles();
        let small = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let p = Partition::singletons(&small);
        assert!(matches!(
            modularity(&g, &p),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(Partition::from_assignment(&g, &[0, 1]).is_err());
    }

    #[test]
    fn zero_weight_graph_has_no_modularity() {
        let g = Graph::from_edges(3, [(0, 1, 0.0)]).unwrap();
        assert!(matches!(
            modularity(&g, &Partition::singletons(&g)),
            Err(Error::ZeroTotalWeight)
        ));
        assert!(modularity_optimization(&g, 0).is_err());
    }

    #[test]
    fn optimizer_merges_single_edge() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let p = modularity_optimization(&g, 5).unwrap();
        assert_eq!(p.assignment(), &[0, 0]);
        assert!(modularity(&g, &p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn optimizer_splits_two_disjoint_edges() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        for seed in 0..20 {
            let p = modularity_optimization(&g, seed).unwrap();
            assert_eq!(p.community_count(), 2);
            assert_eq!(p.community(0), p.community(1));
            assert_eq!(p.community(2), p.community(3));
            assert!((modularity(&g, &p).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn optimizer_finds_triangles() {
        let g = two_triangles();
        for seed in 0..20 {
            let p = modularity_optimization(&g, seed).unwrap();
            let a = p.community(0);
            let b = p.community(3);
            assert_ne!(a, b);
            assert!((0..3).all(|i| p.community(i) == a));
            assert!((3..6).all(|i| p.community(i) == b));
        }
    }

    #[test]
    fn isolated_nodes_stay_alone() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let p = modularity_optimization(&g, 1).unwrap();
        assert_eq!(p.community_count(), 2);
        assert_ne!(p.community(3), p.community(0));
    }

    #[test]
    fn aggregation_of_triangles() {
        let g = two_triangles();
        let p = Partition::from_assignment(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        let (coarse, membership) = node_aggregation(&g, &p).unwrap();
        assert_eq!(membership, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(coarse.node_count(), 2);
        assert_eq!(coarse.edge_weight(0, 1), Some(1.0));
        assert_eq!(coarse.self_loop(0), 3.0);
        assert_eq!(coarse.self_loop(1), 3.0);
        let q = modularity(&coarse, &Partition::singletons(&coarse)).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_aggregation_is_identity() {
        let g = two_triangles();
        let (coarse, membership) = node_aggregation(&g, &Partition::singletons(&g)).unwrap();
        assert_eq!(membership, (0..6).collect::<Vec<_>>());
        assert_eq!(
            coarse,
            Graph::from_edges(6, g.edges().iter().map(|e| (e.u, e.v, e.weight))).unwrap()
        );
    }

    #[test]
    fn compact_renumbers_after_moves() {
        let g = two_triangles();
        let mut p = Partition::singletons(&g);
        p.move_node(&g, 1, 0).unwrap();
        p.move_node(&g, 2, 0).unwrap();
        p.move_node(&g, 5, 4).unwrap();
        assert_eq!(p.community_count(), 3);
        p.compact();
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 2, 2]);
        assert_eq!(
            p,
            Partition::from_assignment(&g, &[0, 0, 0, 1, 2, 2]).unwrap()
        );
    }

    #[test]
    fn move_to_missing_slot_is_rejected() {
        let g = two_triangles();
        let mut p = Partition::from_assignment(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!(p.move_node(&g, 0, 2).is_err());
        assert!(p.move_node(&g, 9, 0).is_err());
    }
}
