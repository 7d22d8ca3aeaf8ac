use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::objective::{sgd_step, Scratch};
use super::{init_with, negative_distribution, LearnerConfig, LineOrder, LinearDecay};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampler::WeightedSampler;

/// LINE: edges drawn proportionally to weight, each with `negatives`
/// degree^0.75 negatives.
///
/// First order scores a pair by the dot product of the two target vectors,
/// second order by target . context. `Both` trains each at `dim / 2` and
/// concatenates `[first | second]`.
pub fn train_line(g: &Graph, cfg: &LearnerConfig) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop() && e.weight > 0.0)
        .map(|e| (e.u, e.v))
        .collect();
    if edges.is_empty() {
        return Err(Error::Unsupported(
            "LINE needs at least one positive-weight edge between distinct nodes".into(),
        ));
    }
    let weights: Vec<f64> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop() && e.weight > 0.0)
        .map(|e| e.weight)
        .collect();
    let edge_sampler = WeightedSampler::new(&weights)?;
    let samples = cfg.line_samples.unwrap_or(100 * edges.len());

    let run = |order: LineOrder, dim: usize, stream: u64| {
        train_order(g, &edges, &edge_sampler, order, dim, samples, cfg, stream)
    };
    match cfg.line_order {
        LineOrder::First => run(LineOrder::First, cfg.dim, 0),
        LineOrder::Second => run(LineOrder::Second, cfg.dim, 0),
        LineOrder::Both => {
            if cfg.dim % 2 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "LINE with both orders needs an even dimension, got {}",
                    cfg.dim
                )));
            }
            let first = run(LineOrder::First, cfg.dim / 2, 0)?;
            let second = run(LineOrder::Second, cfg.dim / 2, 1)?;
            EmbeddingMatrix::hstack(&[&first, &second])
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn train_order(
    g: &Graph,
    edges: &[(usize, usize)],
    edge_sampler: &WeightedSampler,
    order: LineOrder,
    dim: usize,
    samples: usize,
    cfg: &LearnerConfig,
    stream: u64,
) -> Result<EmbeddingMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let n = g.node_count();
    let mut targets = init_with(&mut rng, n, dim);
    let mut contexts = match order {
        LineOrder::Second => Some(EmbeddingMatrix::zeros(n, dim)),
        _ => None,
    };
    let negatives = negative_distribution(g).ok_or(Error::ZeroTotalWeight)?;
    let schedule = LinearDecay::new(cfg.learning_rate, samples);
    let mut scratch = Scratch::default();
    let mut rows: Vec<(usize, f64)> = Vec::with_capacity(cfg.negatives + 1);

    for step in 0..samples {
        let (a, b) = edges[edge_sampler.sample(&mut rng)];
        let (source, dest) = if rng.gen::<bool>() { (a, b) } else { (b, a) };
        rows.clear();
        rows.push((dest, 1.0));
        for _ in 0..cfg.negatives {
            let neg = negatives.sample(&mut rng);
            if neg != dest && neg != source {
                rows.push((neg, 0.0));
            }
        }
        sgd_step(
            targets.as_mut_slice(),
            contexts.as_mut().map(|c| c.as_mut_slice()),
            dim,
            source,
            &rows,
            schedule.at(step),
            &mut scratch,
        );
    }
    Ok(targets)
}
