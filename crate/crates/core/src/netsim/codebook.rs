//! Random Gaussian codebooks and exhaustive ML search helpers.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Circularly-symmetric Gaussian codeword of `len` complex symbols,
/// rescaled to energy exactly `len · power`.
pub(super) fn gaussian_codeword<R: Rng + ?Sized>(rng: &mut R, len: usize, power: f64) -> Vec<f64> {
    let mut x: Vec<f64> = (0..2 * len).map(|_| StandardNormal.sample(rng)).collect();
    let energy: f64 = x.iter().map(|v| v * v).sum();
    let scale = (len as f64 * power / energy).sqrt();
    x.iter_mut().for_each(|v| *v *= scale);
    x
}

pub(super) fn gaussian_codebook<R: Rng + ?Sized>(rng: &mut R, size: usize, len: usize, power: f64) -> Vec<Vec<f64>> {
    (0..size).map(|_| gaussian_codeword(rng, len, power)).collect()
}

#[inline]
pub(super) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Energy per complex symbol of an interleaved block.
#[inline]
pub(super) fn power_per_symbol(x: &[f64]) -> f64 {
    2.0 * x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

/// Index of the smallest value; the first one wins ties.
pub(super) fn argmin<I: IntoIterator<Item = f64>>(values: I) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.into_iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn codewords_have_exact_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for len in [1, 3, 10] {
            let x = gaussian_codeword(&mut rng, len, 2.5);
            assert_eq!(x.len(), 2 * len);
            assert!((power_per_symbol(&x) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn argmin_first_on_ties() {
        assert_eq!(argmin([3.0, 1.0, 1.0, 2.0]), 1);
        assert_eq!(argmin([0.0]), 0);
    }
}
