use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::LearnerConfig;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampler::WeightedSampler;

/// Node sequences from truncated random walks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    walks: Vec<Vec<usize>>,
}

impl WalkCorpus {
    pub fn new(walks: Vec<Vec<usize>>) -> Self {
        WalkCorpus { walks }
    }

    pub fn walks(&self) -> &[Vec<usize>] {
        &self.walks
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// Per-node transition tables over non-loop neighbors with positive weight.
struct Transitions {
    targets: Vec<Vec<usize>>,
    samplers: Vec<Option<WeightedSampler>>,
}

impl Transitions {
    fn new(g: &Graph) -> Self {
        let mut targets = Vec::with_capacity(g.node_count());
        let mut samplers = Vec::with_capacity(g.node_count());
        for node in 0..g.node_count() {
            let (ids, weights): (Vec<usize>, Vec<f64>) = g
                .neighbors(node)
                .iter()
                .filter(|&&(j, w)| j != node && w > 0.0)
                .copied()
                .unzip();
            samplers.push(WeightedSampler::new(&weights).ok());
            targets.push(ids);
        }
        Transitions { targets, samplers }
    }

    fn step<R: Rng>(&self, node: usize, rng: &mut R) -> Option<usize> {
        let sampler = self.samplers[node].as_ref()?;
        Some(self.targets[node][sampler.sample(rng)])
    }
}

/// Generates `walks_per_node` walks of at most `walk_length` nodes from
/// every node.
///
/// Steps are proportional to edge weight times the node2vec bias (`1/p` to
/// return, `1` to a common neighbor of the previous node, `1/q` otherwise),
/// realized by rejection sampling. With `p == q == 1` no acceptance draw is
/// made, so the walks are plain weighted (DeepWalk) walks.
///
/// Each walk has its own ChaCha stream derived from the seed, which makes
/// the corpus independent of the number of worker threads.
pub fn generate_walks(g: &Graph, cfg: &LearnerConfig) -> Result<WalkCorpus> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    cfg.validate()?;
    let transitions = Transitions::new(g);

    let mut order_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    order_rng.set_stream(u64::MAX);
    let mut starts = Vec::with_capacity(n * cfg.walks_per_node);
    let mut round: Vec<usize> = (0..n).collect();
    for _ in 0..cfg.walks_per_node {
        round.shuffle(&mut order_rng);
        starts.extend_from_slice(&round);
    }

    let biased = cfg.p != 1.0 || cfg.q != 1.0;
    let walks = starts
        .par_iter()
        .enumerate()
        .map(|(id, &start)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(id as u64);
            if biased {
                biased_walk(g, &transitions, start, cfg, &mut rng)
            } else {
                plain_walk(&transitions, start, cfg.walk_length, &mut rng)
            }
        })
        .collect();

    Ok(WalkCorpus { walks })
}

fn plain_walk<R: Rng>(t: &Transitions, start: usize, length: usize, rng: &mut R) -> Vec<usize> {
    let mut walk = Vec::with_capacity(length);
    walk.push(start);
    while walk.len() < length {
        match t.step(*walk.last().unwrap(), rng) {
            Some(next) => walk.push(next),
            None => break,
        }
    }
    walk
}

fn biased_walk<R: Rng>(
    g: &Graph,
    t: &Transitions,
    start: usize,
    cfg: &LearnerConfig,
    rng: &mut R,
) -> Vec<usize> {
    let (ret, out) = (1.0 / cfg.p, 1.0 / cfg.q);
    let max_bias = ret.max(out).max(1.0);

    let mut walk = Vec::with_capacity(cfg.walk_length);
    walk.push(start);
    if cfg.walk_length < 2 {
        return walk;
    }
    match t.step(start, rng) {
        Some(next) => walk.push(next),
        None => return walk,
    }
    while walk.len() < cfg.walk_length {
        let prev = walk[walk.len() - 2];
        let cur = walk[walk.len() - 1];
        let next = loop {
            // `cur` has at least the edge back to `prev`, so step() succeeds.
            let candidate = t.step(cur, rng).unwrap();
            let bias = if candidate == prev {
                ret
            } else if g.has_edge(candidate, prev) {
                1.0
            } else {
                out
            };
            if rng.gen::<f64>() * max_bias < bias {
                break candidate;
            }
        };
        walk.push(next);
    }
    walk
}
