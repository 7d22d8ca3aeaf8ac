//! Constant-time draws from a fixed discrete distribution (Vose's alias
//! method).

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct WeightedSampler {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl WeightedSampler {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "sampler weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParameter(
                "sampler needs at least one positive weight".into(),
            ));
        }

        let n = weights.len();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut prob = vec![0.0; n];
        let mut alias = vec![0; n];
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &p) in scaled.iter().enumerate() {
            if p < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }

        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1.0 up to rounding.
        for i in large.into_iter().chain(small) {
            prob[i] = if weights[i] > 0.0 { 1.0 } else { 0.0 };
            alias[i] = i;
        }
        // A zero-weight slot left over by rounding must never accept itself.
        for i in 0..n {
            if weights[i] == 0.0 && alias[i] == i {
                let fallback = weights.iter().position(|&w| w > 0.0).unwrap();
                prob[i] = 0.0;
                alias[i] = fallback;
            }
        }

        Ok(WeightedSampler { prob, alias })
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.gen_range(0..self.prob.len());
        if rng.gen::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frequencies(weights: &[f64], draws: usize, seed: u64) -> Vec<f64> {
        let sampler = WeightedSampler::new(weights).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0usize; weights.len()];
        for _ in 0..draws {
            counts[sampler.sample(&mut rng)] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn three_to_one() {
        let f = frequencies(&[3.0, 1.0], 100_000, 11);
        assert!((f[0] - 0.75).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn zero_weights_never_drawn() {
        let f = frequencies(&[0.0, 2.0, 0.0, 1.0, 0.0], 50_000, 3);
        assert_eq!(f[0], 0.0);
        assert_eq!(f[2], 0.0);
        assert_eq!(f[4], 0.0);
        assert!((f[1] - 2.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn rejects_degenerate_weights() {
        assert!(WeightedSampler::new(&[]).is_err());
        assert!(WeightedSampler::new(&[0.0, 0.0]).is_err());
        assert!(WeightedSampler::new(&[1.0, -1.0]).is_err());
        assert!(WeightedSampler::new(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn single_outcome() {
        let f = frequencies(&[0.3], 100, 0);
        assert_eq!(f, vec![1.0]);
    }

    #[test]
    fn many_uneven_weights() {
        let weights: Vec<f64> = (1..=20).map(|i| (i * i) as f64).collect();
        let total: f64 = weights.iter().sum();
        let f = frequencies(&weights, 400_000, 9);
        for (w, p) in weights.iter().zip(&f) {
            assert!((w / total - p).abs() < 0.005);
        }
    }
}
