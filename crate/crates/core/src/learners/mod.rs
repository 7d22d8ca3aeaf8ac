//! Plug-in node embedding learners: truncated (optionally biased) random
//! walks fed to skip-gram with negative sampling, and LINE edge sampling.

mod line;
pub mod objective;
mod sgns;
mod walks;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampler::WeightedSampler;

pub use line::train_line;
pub use sgns::{train_sgns, train_sgns_with_stats, TrainStats};
pub use walks::{generate_walks, WalkCorpus};

/// Exponent applied to weighted degrees for the negative-sampling
/// distribution.
pub const NEGATIVE_EXPONENT: f64 = 0.75;

/// The learning rate never decays below `initial * MIN_LR_FRACTION`.
pub const MIN_LR_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Learner {
    DeepWalk,
    Node2Vec,
    Line,
}

impl fmt::Display for Learner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Learner::DeepWalk => "deepwalk",
            Learner::Node2Vec => "node2vec",
            Learner::Line => "line",
        })
    }
}

impl FromStr for Learner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deepwalk" | "dw" => Ok(Learner::DeepWalk),
            "node2vec" | "n2v" => Ok(Learner::Node2Vec),
            "line" => Ok(Learner::Line),
            other => Err(Error::InvalidParameter(format!(
                "unknown learner `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineOrder {
    First,
    Second,
    /// First- and second-order halves of `dim / 2` each, concatenated.
    Both,
}

impl fmt::Display for LineOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineOrder::First => "first",
            LineOrder::Second => "second",
            LineOrder::Both => "both",
        })
    }
}

impl FromStr for LineOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" | "1" => Ok(LineOrder::First),
            "second" | "2" => Ok(LineOrder::Second),
            "both" => Ok(LineOrder::Both),
            other => Err(Error::InvalidParameter(format!(
                "unknown LINE order `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerConfig {
    pub dim: usize,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
    pub learning_rate: f64,
    pub negatives: usize,
    /// node2vec return parameter.
    pub p: f64,
    /// node2vec in-out parameter.
    pub q: f64,
    pub line_order: LineOrder,
    /// Edge samples for LINE; `None` means `100 * |E|`.
    pub line_samples: Option<usize>,
    /// Passes of skip-gram over the walk corpus.
    pub epochs: usize,
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            dim: 64,
            walks_per_node: 10,
            walk_length: 40,
            window: 5,
            learning_rate: 0.025,
            negatives: 5,
            p: 1.0,
            q: 1.0,
            line_order: LineOrder::Both,
            line_samples: None,
            epochs: 1,
            seed: 0,
        }
    }
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dim", self.dim),
            ("walks_per_node", self.walks_per_node),
            ("walk_length", self.walk_length),
            ("window", self.window),
            ("negatives", self.negatives),
            ("epochs", self.epochs),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        for (name, value) in [
            ("learning_rate", self.learning_rate),
            ("p", self.p),
            ("q", self.q),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if self.line_samples == Some(0) {
            return Err(Error::InvalidParameter(
                "line_samples must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Trains one embedding matrix for `g` with the chosen learner.
///
/// `DeepWalk` ignores `cfg.p` / `cfg.q` and walks unbiased.
pub fn learn_embeddings(
    g: &Graph,
    cfg: &LearnerConfig,
    learner: Learner,
) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    match learner {
        Learner::DeepWalk => {
            let unbiased = LearnerConfig {
                p: 1.0,
                q: 1.0,
                ..cfg.clone()
            };
            let corpus = generate_walks(g, &unbiased)?;
            train_sgns(&corpus, g, &unbiased)
        }
        Learner::Node2Vec => {
            let corpus = generate_walks(g, cfg)?;
            train_sgns(&corpus, g, cfg)
        }
        Learner::Line => train_line(g, cfg),
    }
}

/// Target vectors uniform in `[-0.5/d, 0.5/d]`, the starting point of every
/// learner.
pub fn initial_embeddings(rows: usize, dim: usize, seed: u64) -> EmbeddingMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    init_with(&mut rng, rows, dim)
}

pub(crate) fn init_with<R: Rng>(rng: &mut R, rows: usize, dim: usize) -> EmbeddingMatrix {
    let half = 0.5 / dim as f64;
    let data = (0..rows * dim)
        .map(|_| rng.gen_range(-half..half))
        .collect();
    EmbeddingMatrix::from_vec(rows, dim, data).unwrap()
}

/// Negative-sampling distribution over nodes, proportional to
/// `degree^0.75`. `None` when every node has zero degree.
pub fn negative_distribution(g: &Graph) -> Option<WeightedSampler> {
    let weights: Vec<f64> = g
        .degrees()
        .iter()
        .map(|k| k.powf(NEGATIVE_EXPONENT))
        .collect();
    WeightedSampler::new(&weights).ok()
}

/// Linear decay from `initial` to `initial * MIN_LR_FRACTION` over `total`
/// steps.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LinearDecay {
    initial: f64,
    total: usize,
}

impl LinearDecay {
    pub(crate) fn new(initial: f64, total: usize) -> Self {
        LinearDecay { initial, total }
    }

    pub(crate) fn at(&self, step: usize) -> f64 {
        let remaining = 1.0 - step as f64 / self.total.max(1) as f64;
        self.initial * remaining.max(MIN_LR_FRACTION)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).unwrap()
    }

    #[test]
    fn defaults_validate() {
        let cfg = LearnerConfig::default();
        cfg.validate().unwrap();
        assert_eq!(
            (
                cfg.dim,
                cfg.walks_per_node,
                cfg.walk_length,
                cfg.window,
                cfg.negatives
            ),
            (64, 10, 40, 5, 5)
        );
        assert_eq!(cfg.learning_rate, 0.025);
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            LearnerConfig {
                dim: 0,
                ..Default::default()
            },
            LearnerConfig {
                window: 0,
                ..Default::default()
            },
            LearnerConfig {
                learning_rate: 0.0,
                ..Default::default()
            },
            LearnerConfig {
                p: -1.0,
                ..Default::default()
            },
            LearnerConfig {
                q: f64::NAN,
                ..Default::default()
            },
            LearnerConfig {
                line_samples: Some(0),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("DeepWalk".parse::<Learner>().unwrap(), Learner::DeepWalk);
        assert_eq!("n2v".parse::<Learner>().unwrap(), Learner::Node2Vec);
        assert_eq!("line".parse::<Learner>().unwrap(), Learner::Line);
        assert!("sdne".parse::<Learner>().is_err());
        assert_eq!("both".parse::<LineOrder>().unwrap(), LineOrder::Both);
        for l in [Learner::DeepWalk, Learner::Node2Vec, Learner::Line] {
            assert_eq!(l.to_string().parse::<Learner>().unwrap(), l);
        }
    }

    #[test]
    fn deepwalk_is_unbiased_node2vec() {
        let g = ring(12);
        let cfg = LearnerConfig {
            dim: 8,
            walk_length: 10,
            walks_per_node: 3,
            seed: 17,
            ..Default::default()
        };
        let dw = learn_embeddings(&g, &cfg, Learner::DeepWalk).unwrap();
        let n2v = learn_embeddings(&g, &cfg, Learner::Node2Vec).unwrap();
        assert_eq!(dw, n2v);

        let biased = LearnerConfig {
            p: 0.25,
            q: 4.0,
            ..cfg.clone()
        };
        let dw_biased = learn_embeddings(&g, &biased, Learner::DeepWalk).unwrap();
        assert_eq!(dw, dw_biased);
    }

    #[test]
    fn row_count_matches_for_every_learner() {
        let g = ring(9);
        let cfg = LearnerConfig {
            dim: 4,
            walk_length: 8,
            walks_per_node: 2,
            ..Default::default()
        };
        for learner in [Learner::DeepWalk, Learner::Node2Vec, Learner::Line] {
            let z = learn_embeddings(&g, &cfg, learner).unwrap();
            assert_eq!((z.rows(), z.dim()), (9, 4));
            assert!(z.is_finite());
        }
    }

    #[test]
    fn decay_schedule() {
        let d = LinearDecay::new(0.025, 100);
        assert_eq!(d.at(0), 0.025);
        assert!((d.at(50) - 0.0125).abs() < 1e-15);
        assert_eq!(d.at(100), 0.025 * MIN_LR_FRACTION);
        assert_eq!(d.at(1000), 0.025 * MIN_LR_FRACTION);
    }

    #[test]
    fn initial_embeddings_in_range() {
        let z = initial_embeddings(20, 8, 3);
        assert!(z.as_slice().iter().all(|x| x.abs() <= 0.5 / 8.0));
        assert_eq!(z, initial_embeddings(20, 8, 3));
    }
}
