//! Link-prediction evaluation: edge splits, negative pairs, cosine scoring,
//! AUC, rank-sum significance, compression reports and parameter sweeps.

mod experiment;
mod metrics;
mod ranksum;
mod report;
mod split;

pub use experiment::{
    run_link_prediction, run_repetition, sweep, ExperimentConfig, Method, RepetitionResult,
    SweepParam, SweepPoint,
};
pub use metrics::{auc, cosine, cosine_score, midranks};
pub use ranksum::{rank_sum_test, RankSumMethod, RankSumResult, EXACT_MAX_POOLED};
pub use report::{
    compression_report, render_table, write_auc_tsv, write_compression_tsv, write_significance_tsv,
    write_sweep_tsv, write_timings_tsv, CompressionLevel, EvalReport, MethodResult, Significance,
};
pub use split::{sample_negative_pairs, split_edges, EdgeSplit};
