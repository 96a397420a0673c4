//! Stratified dummy baseline.
//!
//! Predicts positive with probability equal to the training prior, using a
//! hash of `(seed, feature bits)` as the randomness source so that
//! predictions are a deterministic function of the fitted seed and the
//! input row.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct DummyClassifier<S> {
    pub prior: S,
    pub seed: u64,
}

fn fnv1a(seed: u64, row_bits: impl Iterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in seed.to_le_bytes() {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    for bits in row_bits {
        for byte in bits.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

impl<S: Scalar> DummyClassifier<S> {
    pub fn fit(y: &[bool], seed: u64) -> Self {
        let pos = y.iter().filter(|&&l| l).count();
        Self {
            prior: S::from_n(pos) / S::from_n(y.len().max(1)),
            seed,
        }
    }

    /// Uniform draw in [0, 1) determined by the row contents and the seed.
    fn draw(&self, row: &[S]) -> S {
        let h = fnv1a(self.seed, row.iter().map(|v| v.to_f64_c().to_bits()));
        S::from_f((h >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
    }

    /// Score mapped so that `score >= 0.5` happens with probability `prior`
    /// while remaining independent of the label.
    pub fn score(&self, row: &[S]) -> S {
        let u = self.draw(row);
        let half = S::from_f(0.5);
        if u < self.prior {
            half + half * (u / self.prior)
        } else {
            half * (u - self.prior) / (S::one() - self.prior)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_rate_tracks_prior() {
        let mut y = vec![true; 10];
        y.extend(vec![false; 90]);
        let model: DummyClassifier<f64> = DummyClassifier::fit(&y, 42);
        assert_eq!(model.prior, 0.1);
        // Binomial check on 10_000 deterministic draws: expect 1000 +- 2%.
        let positives = (0..10_000)
            .filter(|&i| {
                let row = [i as f64, (i * 7) as f64];
                model.score(&row) >= 0.5
            })
            .count();
        let rate = positives as f64 / 10_000.0;
        assert!((rate - 0.1).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn scores_are_deterministic_per_row() {
        let model: DummyClassifier<f64> = DummyClassifier::fit(&[true, false], 7);
        let row = [0.25, -3.5];
        assert_eq!(model.score(&row), model.score(&row));
    }
}
