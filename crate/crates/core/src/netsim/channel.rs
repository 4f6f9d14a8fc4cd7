use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Circularly-symmetric complex AWGN with variance `N` per complex symbol,
/// applied to interleaved real/imaginary samples (`N/2` per component).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    variance: f64,
    sigma: f64,
}

impl NoiseModel {
    pub fn new(variance: f64) -> NoiseModel {
        assert!(variance >= 0.0 && variance.is_finite());
        NoiseModel {
            variance,
            sigma: (variance / 2.0).sqrt(),
        }
    }

    pub fn noiseless() -> NoiseModel {
        NoiseModel::new(0.0)
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn is_noiseless(&self) -> bool {
        self.variance == 0.0
    }

    /// Adds noise in place. Draws nothing when noiseless.
    pub fn add_to<R: Rng + ?Sized>(&self, rng: &mut R, samples: &mut [f64]) {
        if self.is_noiseless() {
            return;
        }
        for v in samples {
            let z: f64 = StandardNormal.sample(rng);
            *v += self.sigma * z;
        }
    }
}
