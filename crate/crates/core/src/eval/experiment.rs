//! Repeated link-prediction runs and one-parameter sensitivity sweeps.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::metrics::{auc, cosine_score};
use super::ranksum::rank_sum_test;
use super::report::{compression_report, CompressionLevel, EvalReport, MethodResult, Significance};
use super::split::{sample_negative_pairs, split_edges};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hierarchy::hierarchical_sampling;
use crate::learners::{Learner, LearnerConfig};
use crate::pipeline::{learn_level, run_hsrl};

/// Stream offset separating negative-pair draws from the edge split.
const NEGATIVE_SEED_OFFSET: u64 = 0x5EED_0000_0000;

/// A learner on its own, or wrapped in hierarchical compression with up to
/// `levels` coarse levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Plain(Learner),
    Hierarchical { learner: Learner, levels: usize },
}

impl Method {
    pub fn learner(&self) -> Learner {
        match *self {
            Method::Plain(l) | Method::Hierarchical { learner: l, .. } => l,
        }
    }

    pub fn is_hierarchical(&self) -> bool {
        matches!(self, Method::Hierarchical { .. })
    }

    pub fn embed(&self, g: &Graph, cfg: &LearnerConfig) -> Result<EmbeddingMatrix> {
        match *self {
            Method::Plain(learner) => learn_level(g, cfg, learner),
            Method::Hierarchical { learner, levels } => {
                Ok(run_hsrl(g, levels, cfg, learner)?.embeddings)
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Plain(Learner::DeepWalk) => f.write_str("DeepWalk"),
            Method::Plain(Learner::Node2Vec) => f.write_str("node2vec"),
            Method::Plain(Learner::Line) => f.write_str("LINE"),
            Method::Hierarchical { learner, .. } => {
                let short = match learner {
                    Learner::DeepWalk => "DW",
                    Learner::Node2Vec => "N2V",
                    Learner::Line => "LINE",
                };
                write!(f, "HSRL({short})")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub learner: LearnerConfig,
    pub methods: Vec<Method>,
    /// Fraction of edges kept for training.
    pub ratio: f64,
    /// One repetition per seed; each seed drives the split, the negatives
    /// and the learners.
    pub seeds: Vec<u64>,
    /// Levels for the compression report of the full graph.
    pub report_levels: usize,
    pub significance_level: f64,
}

impl ExperimentConfig {
    /// Plain learner vs. its hierarchical version, 20 repetitions on seeds
    /// `0..20`, 80/20 split, three coarse levels.
    pub fn paired(dataset: impl Into<String>, learner: Learner, cfg: LearnerConfig) -> Self {
        ExperimentConfig {
            dataset: dataset.into(),
            learner: cfg,
            methods: vec![
                Method::Plain(learner),
                Method::Hierarchical { learner, levels: 3 },
            ],
            ratio: 0.8,
            seeds: (0..20).collect(),
            report_levels: 3,
            significance_level: 0.05,
        }
    }
}

/// AUCs of every method on one split, in `methods` order.
#[derive(Debug, Clone)]
pub struct RepetitionResult {
    pub seed: u64,
    pub aucs: Vec<f64>,
    pub train_time: Vec<Duration>,
}

/// Trains every method on the training part of one split and scores held
/// out edges against an equal number of non-edges of the full graph.
pub fn run_repetition(g: &Graph, cfg: &ExperimentConfig, seed: u64) -> Result<RepetitionResult> {
    let split = split_edges(g, cfg.ratio, seed)?;
    if split.test_positives.is_empty() {
        return Err(Error::InvalidParameter(
            "split leaves no test edges; use a larger graph or smaller ratio".into(),
        ));
    }
    let negatives = sample_negative_pairs(
        g,
        split.test_positives.len(),
        seed.wrapping_add(NEGATIVE_SEED_OFFSET),
    )?;
    let learner_cfg = LearnerConfig {
        seed,
        ..cfg.learner.clone()
    };

    let mut aucs = Vec::with_capacity(cfg.methods.len());
    let mut train_time = Vec::with_capacity(cfg.methods.len());
    for method in &cfg.methods {
        let start = Instant::now();
        let z = method.embed(&split.train_graph, &learner_cfg)?;
        train_time.push(start.elapsed());
        let score = |pairs: &[(usize, usize)]| -> Result<Vec<f64>> {
            pairs.iter().map(|&(u, v)| cosine_score(&z, u, v)).collect()
        };
        aucs.push(auc(&score(&split.test_positives)?, &score(&negatives)?)?);
    }
    Ok(RepetitionResult {
        seed,
        aucs,
        train_time,
    })
}

/// Runs every repetition (in parallel; each one is deterministic), then
/// assembles AUC lists, pairwise rank-sum tests and the compression report.
pub fn run_link_prediction(g: &Graph, cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.learner.validate()?;
    if cfg.methods.is_empty() || cfg.seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "experiment needs at least one method and one seed".into(),
        ));
    }
    let start = Instant::now();
    let hierarchy = hierarchical_sampling(g, cfg.report_levels, cfg.seeds[0])?;
    let compression: Vec<CompressionLevel> = compression_report(&hierarchy);
    let compress_time = start.elapsed();

    let reps = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_repetition(g, cfg, seed))
        .collect::<Result<Vec<_>>>()?;

    let methods: Vec<MethodResult> = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(m, method)| MethodResult {
            name: method.to_string(),
            hierarchical: method.is_hierarchical(),
            seeds: reps.iter().map(|r| r.seed).collect(),
            aucs: reps.iter().map(|r| r.aucs[m]).collect(),
        })
        .collect();

    let mut significance = Vec::new();
    if cfg.seeds.len() >= 2 {
        for (i, a) in methods.iter().enumerate() {
            for b in methods.iter().skip(i + 1) {
                let test = rank_sum_test(&a.aucs, &b.aucs)?;
                significance.push(Significance {
                    method: a.name.clone(),
                    baseline: b.name.clone(),
                    statistic: test.statistic,
                    p_value: test.p_value,
                    degenerate: test.degenerate,
                });
            }
        }
    }

    let mut timings = vec![("compress".to_owned(), compress_time)];
    for (m, method) in cfg.methods.iter().enumerate() {
        let total: Duration = reps.iter().map(|r| r.train_time[m]).sum();
        timings.push((format!("train {method}"), total));
    }

    Ok(EvalReport {
        dataset: cfg.dataset.clone(),
        ratio: cfg.ratio,
        significance_level: cfg.significance_level,
        methods,
        significance,
        compression,
        timings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Dim,
    Levels,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Dim => "dim",
            SweepParam::Levels => "levels",
        })
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dim" | "d" => Ok(SweepParam::Dim),
            "levels" | "k" | "K" => Ok(SweepParam::Levels),
            other => Err(Error::InvalidParameter(format!("cannot sweep `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: usize,
    pub aucs: Vec<f64>,
    pub mean_auc: f64,
    pub std_auc: f64,
}

/// Link-prediction AUC of `HSRL(learner)` as one parameter varies and all
/// others stay at `base`.
pub fn sweep(
    g: &Graph,
    base: &ExperimentConfig,
    learner: Learner,
    levels: usize,
    param: SweepParam,
    values: &[usize],
) -> Result<Vec<SweepPoint>> {
    values
        .iter()
        .map(|&value| {
            let mut cfg = base.clone();
            let mut k = levels;
            match param {
                SweepParam::Dim => cfg.learner.dim = value,
                SweepParam::Levels => k = value,
            }
            cfg.methods = vec![Method::Hierarchical { learner, levels: k }];
            cfg.learner.validate()?;
            let aucs = cfg
                .seeds
                .par_iter()
                .map(|&seed| run_repetition(g, &cfg, seed).map(|r| r.aucs[0]))
                .collect::<Result<Vec<_>>>()?;
            let (mean_auc, std_auc) = mean_std(&aucs);
            Ok(SweepPoint {
                value,
                aucs,
                mean_auc,
                std_auc,
            })
        })
        .collect()
}

pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::planted_partition;

    fn quick_cfg() -> LearnerConfig {
        LearnerConfig {
            dim: 8,
            walks_per_node: 4,
            walk_length: 15,
            ..Default::default()
        }
    }

    #[test]
    fn method_names() {
        assert_eq!(Method::Plain(Learner::DeepWalk).to_string(), "DeepWalk");
        assert_eq!(
            Method::Hierarchical {
                learner: Learner::Node2Vec,
                levels: 3
            }
            .to_string(),
            "HSRL(N2V)"
        );
        assert_eq!(
            Method::Hierarchical {
                learner: Learner::Line,
                levels: 2
            }
            .to_string(),
            "HSRL(LINE)"
        );
    }

    #[test]
    fn report_has_one_auc_per_seed() {
        let g = planted_partition(&[10, 10, 10], 0.5, 0.03, 1);
        let mut cfg = ExperimentConfig::paired("toy", Learner::DeepWalk, quick_cfg());
        cfg.seeds = (0..4).collect();
        let report = run_link_prediction(&g, &cfg).unwrap();
        assert_eq!(report.methods.len(), 2);
        for m in &report.methods {
            assert_eq!(m.aucs.len(), 4);
            assert!(m.aucs.iter().all(|a| (0.0..=1.0).contains(a)));
        }
        assert_eq!(report.significance.len(), 1);
        assert_eq!(report.compression[0].node_ratio, 1.0);

        let again = run_link_prediction(&g, &cfg).unwrap();
        assert_eq!(again.methods, report.methods);
    }

    #[test]
    fn sweep_varies_one_parameter() {
        let g = planted_partition(&[8, 8], 0.6, 0.05, 2);
        let mut cfg = ExperimentConfig::paired("toy", Learner::DeepWalk, quick_cfg());
        cfg.seeds = vec![0, 1];
        let points = sweep(&g, &cfg, Learner::DeepWalk, 2, SweepParam::Dim, &[4, 8]).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[1].value, 8);
        assert_eq!(points[0].aucs.len(), 2);
        assert!(sweep(&g, &cfg, Learner::DeepWalk, 2, SweepParam::Dim, &[0]).is_err());
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 2f64.sqrt()));
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
    }
}
