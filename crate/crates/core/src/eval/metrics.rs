use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::learners::objective::dot;

/// Cosine similarity of two rows; a zero-norm row scores 0.
pub fn cosine_score(z: &EmbeddingMatrix, u: usize, v: usize) -> Result<f64> {
    for node in [u, v] {
        if node >= z.rows() {
            return Err(Error::NodeOutOfRange {
                node,
                count: z.rows(),
            });
        }
    }
    Ok(cosine(z.row(u), z.row(v)))
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// Midranks (1-based) of `values`; tied values share the mean of their
/// positions.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end share their average.
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half, from the rank sum of the positives.
pub fn auc(pos_scores: &[f64], neg_scores: &[f64]) -> Result<f64> {
    if pos_scores.is_empty() || neg_scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    if pos_scores.iter().chain(neg_scores).any(|s| s.is_nan()) {
        return Err(Error::InvalidParameter("scores must not be NaN".into()));
    }
    let pooled: Vec<f64> = pos_scores.iter().chain(neg_scores).copied().collect();
    let ranks = midranks(&pooled);
    let np = pos_scores.len() as f64;
    let nn = neg_scores.len() as f64;
    let rank_sum: f64 = ranks[..pos_scores.len()].iter().sum();
    let u = rank_sum - np * (np + 1.0) / 2.0;
    Ok(u / (np * nn))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_examples() {
        let z =
            EmbeddingMatrix::from_vec(4, 2, vec![1.0, 0.0, 1.0, 1.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        assert!((cosine_score(&z, 1, 1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine_score(&z, 0, 2).unwrap(), 0.0);
        assert!((cosine_score(&z, 0, 1).unwrap() - 0.7071).abs() < 1e-4);
        assert_eq!(cosine_score(&z, 0, 3).unwrap(), 0.0);
        assert!(cosine_score(&z, 0, 4).is_err());
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.9, 0.8], &[0.2, 0.1]).unwrap(), 1.0);
        assert_eq!(auc(&[0.5], &[0.5]).unwrap(), 0.5);
        assert_eq!(auc(&[0.8, 0.4], &[0.6, 0.2]).unwrap(), 0.75);
        assert_eq!(auc(&[0.1], &[0.2, 0.3]).unwrap(), 0.0);
        assert!(auc(&[], &[0.1]).is_err());
        assert!(auc(&[0.1], &[]).is_err());
        assert!(auc(&[f64::NAN], &[0.1]).is_err());
    }

    #[test]
    fn midrank_ties() {
        assert_eq!(midranks(&[1.0, 2.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(midranks(&[3.0, 3.0, 3.0]), vec![2.0, 2.0, 2.0]);
        assert_eq!(midranks(&[]), Vec::<f64>::new());
    }
}
