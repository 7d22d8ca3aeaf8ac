//! Reference implementations used as independent oracles.
#![allow(dead_code)]

use hsrl::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Modularity straight from the double sum over node pairs, with the
/// adjacency matrix holding `2w` on the diagonal for a self-loop of weight
/// `w` (so row sums are weighted degrees).
pub fn modularity_double_sum(g: &Graph, assignment: &[usize]) -> f64 {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        if e.u == e.v {
            a[e.u][e.u] += 2.0 * e.weight;
        } else {
            a[e.u][e.v] += e.weight;
            a[e.v][e.u] += e.weight;
        }
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `n` items as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            if prefix.is_empty() && c > 0 {
                break;
            }
            prefix.push(c);
            let next_max = if prefix.len() == 1 { 0 } else { max.max(c) };
            rec(prefix, next_max, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    rec(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Same partition up to relabeling.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

pub fn two_triangles() -> Graph {
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

pub fn two_edges() -> Graph {
    Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap()
}

/// Two disjoint unit-weight cliques of `size` nodes: nodes `0..size` and
/// `size..2*size`.
pub fn two_cliques(size: usize) -> Graph {
    let mut edges = Vec::new();
    for offset in [0, size] {
        for u in 0..size {
            for v in (u + 1)..size {
                edges.push((offset + u, offset + v, 1.0));
            }
        }
    }
    Graph::from_edges(2 * size, edges).unwrap()
}

/// Random graph with random positive weights and occasional self-loops;
/// guaranteed to have positive total weight.
pub fn random_weighted_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = if n >= 2 {
        vec![(0, 1, rng.gen_range(0.5..2.0))]
    } else {
        vec![(0, 0, 1.0)]
    };
    for u in 0..n {
        if rng.gen::<f64>() < 0.1 {
            edges.push((u, u, rng.gen_range(0.1..3.0)));
        }
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v, rng.gen_range(0.1..3.0)));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_assignment(n: usize, communities: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..communities)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// AUC by comparing every positive with every negative.
pub fn auc_pairs(pos: &[f64], neg: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &p in pos {
        for &q in neg {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

/// Two-sided rank-sum p-value by enumerating every way of choosing which
/// pooled observations form the first sample.
pub fn rank_sum_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let n1 = a.len();
    // Midranks by counting.
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|&x| {
            let below = pooled.iter().filter(|&&y| y < x).count() as f64;
            let equal = pooled.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let u_of = |mask: u32| -> f64 {
        let r: f64 = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ranks[i])
            .sum();
        r - (n1 * (n1 + 1)) as f64 / 2.0
    };
    let mean = (n1 * (n - n1)) as f64 / 2.0;
    let observed = u_of((1u32 << n1) - 1);
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        total += 1;
        if (u_of(mask) - mean).abs() >= (observed - mean).abs() - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Mean cosine over distinct pairs inside the same clique minus mean over
/// pairs in different cliques (nodes `< size` form the first clique).
pub fn clique_separation(z: &hsrl::EmbeddingMatrix, size: usize) -> f64 {
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for i in 0..2 * size {
        for j in (i + 1)..2 * size {
            let c = cosine(z.row(i), z.row(j));
            if (i < size) == (j < size) {
                intra.push(c);
            } else {
                inter.push(c);
            }
        }
    }
    mean(&intra) - mean(&inter)
}
