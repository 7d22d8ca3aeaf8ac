//! Hierarchical embedding: compress, learn per level, concatenate.

use rayon::prelude::*;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hierarchy::{hierarchical_sampling, Hierarchy};
use crate::learners::{initial_embeddings, learn_embeddings, Learner, LearnerConfig};

#[derive(Debug, Clone)]
pub struct HsrlResult {
    /// `|V^0| x (achieved_levels + 1) * dim`.
    pub embeddings: EmbeddingMatrix,
    pub per_level: Vec<EmbeddingMatrix>,
    pub hierarchy: Hierarchy,
}

/// The level-`level` node containing original node `node`.
pub fn membership_chain(h: &Hierarchy, node: usize, level: usize) -> Result<usize> {
    if level > h.achieved_levels() {
        return Err(Error::LevelOutOfRange {
            level,
            levels: h.achieved_levels(),
        });
    }
    h.base().check_node(node)?;
    Ok(h.memberships()[..level]
        .iter()
        .fold(node, |current, map| map[current]))
}

/// `chains[k][i]` for every level `k` and original node `i`.
pub fn membership_chains(h: &Hierarchy) -> Vec<Vec<usize>> {
    let mut chains = vec![(0..h.base().node_count()).collect::<Vec<_>>()];
    for map in h.memberships() {
        let next = chains.last().unwrap().iter().map(|&c| map[c]).collect();
        chains.push(next);
    }
    chains
}

/// Row `i` of the result is `[Z^0[c_i^0], Z^1[c_i^1], .., Z^K[c_i^K]]`.
pub fn concatenate(h: &Hierarchy, per_level: &[EmbeddingMatrix]) -> Result<EmbeddingMatrix> {
    if per_level.len() != h.graphs().len() {
        return Err(Error::SizeMismatch {
            expected: h.graphs().len(),
            actual: per_level.len(),
        });
    }
    for (g, z) in h.graphs().iter().zip(per_level) {
        if z.rows() != g.node_count() {
            return Err(Error::SizeMismatch {
                expected: g.node_count(),
                actual: z.rows(),
            });
        }
    }
    let chains = membership_chains(h);
    let n = h.base().node_count();
    let dim: usize = per_level.iter().map(|z| z.dim()).sum();
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        for (chain, z) in chains.iter().zip(per_level) {
            data.extend_from_slice(z.row(chain[i]));
        }
    }
    EmbeddingMatrix::from_vec(n, dim, data)
}

/// Embeds one hierarchy level. A level with no edge between distinct nodes
/// has nothing for LINE to sample, so it keeps its initial vectors, which is
/// also what the walk learners produce there.
pub fn learn_level(g: &Graph, cfg: &LearnerConfig, learner: Learner) -> Result<EmbeddingMatrix> {
    let trainable = g.edges().iter().any(|e| !e.is_loop() && e.weight > 0.0);
    if learner == Learner::Line && !trainable {
        cfg.validate()?;
        return Ok(initial_embeddings(g.node_count(), cfg.dim, cfg.seed));
    }
    learn_embeddings(g, cfg, learner)
}

/// Compresses `g` up to `levels` times (seeded with `cfg.seed`), trains
/// every level independently with seed `cfg.seed + k`, and concatenates.
/// Levels train in parallel; each level is deterministic on its own.
pub fn run_hsrl(
    g: &Graph,
    levels: usize,
    cfg: &LearnerConfig,
    learner: Learner,
) -> Result<HsrlResult> {
    cfg.validate()?;
    let hierarchy = hierarchical_sampling(g, levels, cfg.seed)?;
    let per_level = hierarchy
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(k, level)| {
            let level_cfg = LearnerConfig {
                seed: cfg.seed.wrapping_add(k as u64),
                ..cfg.clone()
            };
            learn_level(level, &level_cfg, learner)
        })
        .collect::<Result<Vec<_>>>()?;
    let embeddings = concatenate(&hierarchy, &per_level)?;
    Ok(HsrlResult {
        embeddings,
        per_level,
        hierarchy,
    })
}
