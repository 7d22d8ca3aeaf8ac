use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::objective::{sgd_step, Scratch};
use super::{init_with, negative_distribution, LearnerConfig, LinearDecay, WalkCorpus};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Loss bookkeeping for one skip-gram run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainStats {
    pub pairs: usize,
    /// Mean pair loss in each tenth of the pair stream (`NaN` when a tenth
    /// saw no pairs).
    pub decile_loss: [f64; 10],
}

pub fn train_sgns(corpus: &WalkCorpus, g: &Graph, cfg: &LearnerConfig) -> Result<EmbeddingMatrix> {
    train_sgns_with_stats(corpus, g, cfg).map(|(z, _)| z)
}

/// Skip-gram with negative sampling over a walk corpus.
///
/// Every node within `window` positions of a center (truncated at walk
/// ends) is a positive context. Negatives come from `degree^0.75` and a
/// draw equal to the positive context is skipped.
pub fn train_sgns_with_stats(
    corpus: &WalkCorpus,
    g: &Graph,
    cfg: &LearnerConfig,
) -> Result<(EmbeddingMatrix, TrainStats)> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = g.node_count();
    let dim = cfg.dim;
    if let Some(&bad) = corpus.walks().iter().flatten().find(|&&v| v >= n) {
        return Err(Error::NodeOutOfRange {
            node: bad,
            count: n,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut targets = init_with(&mut rng, n, dim);
    let mut contexts = EmbeddingMatrix::zeros(n, dim);

    let per_epoch: usize = corpus
        .walks()
        .iter()
        .map(|w| pair_count(w.len(), cfg.window))
        .sum();
    let total = per_epoch * cfg.epochs;
    let mut stats = TrainStats {
        pairs: total,
        decile_loss: [f64::NAN; 10],
    };
    if total == 0 {
        return Ok((targets, stats));
    }
    let negatives = negative_distribution(g).ok_or(Error::ZeroTotalWeight)?;
    let schedule = LinearDecay::new(cfg.learning_rate, total);

    let mut sums = [0.0; 10];
    let mut counts = [0usize; 10];
    let mut scratch = Scratch::default();
    let mut rows: Vec<(usize, f64)> = Vec::with_capacity(cfg.negatives + 1);
    let mut step = 0usize;

    for _ in 0..cfg.epochs {
        for walk in corpus.walks() {
            for (pos, &center) in walk.iter().enumerate() {
                let lo = pos.saturating_sub(cfg.window);
                let hi = (pos + cfg.window).min(walk.len() - 1);
                for (ctx_pos, &context) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                    if ctx_pos == pos {
                        continue;
                    }
                    rows.clear();
                    rows.push((context, 1.0));
                    for _ in 0..cfg.negatives {
                        let neg = negatives.sample(&mut rng);
                        if neg != context {
                            rows.push((neg, 0.0));
                        }
                    }
                    let lr = schedule.at(step);
                    let loss = sgd_step(
                        targets.as_mut_slice(),
                        Some(contexts.as_mut_slice()),
                        dim,
                        center,
                        &rows,
                        lr,
                        &mut scratch,
                    );
                    let bucket = step * 10 / total;
                    sums[bucket] += loss;
                    counts[bucket] += 1;
                    step += 1;
                }
            }
        }
    }

    for b in 0..10 {
        if counts[b] > 0 {
            stats.decile_loss[b] = sums[b] / counts[b] as f64;
        }
    }
    Ok((targets, stats))
}

/// Number of (center, context) pairs in a walk of `len` nodes.
fn pair_count(len: usize, window: usize) -> usize {
    (0..len)
        .map(|pos| {
            let lo = pos.saturating_sub(window);
            let hi = (pos + window).min(len.saturating_sub(1));
            hi - lo
        })
        .sum()
}
