//! Two-sided Wilcoxon rank-sum (Mann-Whitney U) test.

use statrs::function::erf::erfc;

use super::metrics::midranks;
use crate::error::{Error, Result};

/// Pooled sample sizes up to this use the exact permutation distribution of
/// the (mid)rank sum; larger ones use the normal approximation.
pub const EXACT_MAX_POOLED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Mann-Whitney U of the first sample.
    pub statistic: f64,
    pub p_value: f64,
    pub method: RankSumMethod,
    /// Every pooled value identical; `p_value` is 1.
    pub degenerate: bool,
}

pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidParameter(
            "rank-sum test needs at least two values per sample".into(),
        ));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter(
            "samples must not contain NaN".into(),
        ));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n1 = a.len();
    let n = pooled.len();
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let statistic = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;

    let method = if n <= EXACT_MAX_POOLED {
        RankSumMethod::Exact
    } else {
        RankSumMethod::Normal
    };
    if pooled.iter().all(|&x| x == pooled[0]) {
        return Ok(RankSumResult {
            statistic,
            p_value: 1.0,
            method,
            degenerate: true,
        });
    }
    let p_value = match method {
        RankSumMethod::Exact => exact_p_value(&ranks, n1),
        RankSumMethod::Normal => normal_p_value(&ranks, n1, statistic),
    };
    Ok(RankSumResult {
        statistic,
        p_value,
        method,
        degenerate: false,
    })
}

/// Permutation p-value: the share of size-`n1` subsets of the pooled
/// midranks whose sum is at least as far from its mean as the observed one.
/// Midranks are half-integers, so doubled sums are counted exactly.
fn exact_p_value(ranks: &[f64], n1: usize) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[j][s]: subsets of size j with doubled rank sum s.
    let mut ways = vec![vec![0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for &r in &doubled {
        for j in (1..=n1).rev() {
            for s in (r..=max_sum).rev() {
                let add = ways[j - 1][s - r];
                if add != 0.0 {
                    ways[j][s] += add;
                }
            }
        }
    }
    let n = ranks.len();
    // Mean doubled rank sum: n1 * (n + 1).
    let centre = (n1 * (n + 1)) as i64;
    let observed: usize = doubled[..n1].iter().sum();
    let observed_dev = (observed as i64 - centre).abs();
    let (mut extreme, mut total) = (0.0, 0.0);
    for (s, &w) in ways[n1].iter().enumerate() {
        total += w;
        if (s as i64 - centre).abs() >= observed_dev {
            extreme += w;
        }
    }
    (extreme / total).min(1.0)
}

/// Normal approximation with tie-corrected variance and a continuity
/// correction of 1/2.
pub(crate) fn normal_p_value(ranks: &[f64], n1: usize, statistic: f64) -> f64 {
    let n = ranks.len();
    let (n1f, n2f, nf) = (n1 as f64, (n - n1) as f64, n as f64);
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let mean = n1f * n2f / 2.0;
    let z = ((statistic - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
