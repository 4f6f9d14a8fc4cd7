use super::rng::{trial_rng, Purpose};
use super::NoiseModel;
use crate::lattice::{equivalent_noise_power, NestedLatticePair};
use crate::snr::SnrPoint;
use serde::{Deserialize, Serialize};

/// Empirical equivalent noise of MMSE-scaled lattice decoding, per real
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseMeasurement {
    pub gamma: f64,
    pub summands: u32,
    /// `γ² N_d + k P_d (1 - γ)²`.
    pub analytic: f64,
    /// Mean square of `(γ Y + Σ d - Σ c) mod Λ`, what the quantiser sees.
    pub folded: f64,
    /// Same residual with the known coarse-lattice offsets of the transmit
    /// signals removed instead of folding, i.e. `γ Z - (1 - γ) Σ X`.
    pub unfolded: f64,
    /// Set when the analytic noise reaches a quarter of the cell second
    /// moment; folding then visibly shrinks the residual.
    pub wraparound_risk: bool,
}

/// Sum `summands` dithered lattice signals of unit power per complex symbol
/// over noise `1 / snr` and measure the residual after MMSE scaling by
/// `gamma`. Uses a 2-dimensional pair (one complex use per sample).
///
/// Draws depend only on `(snr, summands, samples, seed)`, so sweeping
/// `gamma` with a fixed seed reuses the same channel realisations.
pub fn measure_equivalent_noise(snr: SnrPoint, gamma: f64, summands: u32, samples: u64, seed: u64) -> NoiseMeasurement {
    assert!(snr.linear() > 0.0 && samples > 0 && summands >= 1);
    let power = 1.0;
    let noise_var = power / snr.linear();
    let pair = NestedLatticePair::new(2, (12.0 * power / 2.0f64).sqrt(), 4).expect("valid pair");
    let q = pair.coarse_step();
    let noise = NoiseModel::new(noise_var);
    let k = summands as usize;
    let mut rng = trial_rng(seed, Purpose::Measurement, summands as u64);

    let (mut folded, mut unfolded) = (0.0, 0.0);
    for _ in 0..samples {
        let mut y = [0.0; 2];
        let mut dsum = [0.0; 2];
        let mut csum = [0.0; 2];
        let mut offset = [0.0; 2];
        for _ in 0..k {
            let cw = pair.codeword(&pair.random_message(&mut rng));
            let d = pair.random_dither(&mut rng);
            let x = pair.encode_codeword(&cw, &d);
            let c = pair.point(&cw);
            for t in 0..2 {
                y[t] += x[t];
                dsum[t] += d.values()[t];
                csum[t] += c[t];
                // c - d - x is the coarse lattice point removed by the encoder
                offset[t] += ((c[t] - d.values()[t] - x[t]) / q).round() * q;
            }
        }
        noise.add_to(&mut rng, &mut y);
        let raw: Vec<f64> = (0..2).map(|t| gamma * y[t] + dsum[t] - csum[t]).collect();
        folded += pair.mod_coarse(&raw).iter().map(|v| v * v).sum::<f64>();
        unfolded += raw.iter().zip(&offset).map(|(r, o)| (r + o) * (r + o)).sum::<f64>();
    }
    let n = 2.0 * samples as f64;
    let (p_d, n_d) = (power / 2.0, noise_var / 2.0);
    let analytic = equivalent_noise_power(gamma, summands, p_d, n_d);
    NoiseMeasurement {
        gamma,
        summands,
        analytic,
        folded: folded / n,
        unfolded: unfolded / n,
        wraparound_risk: analytic >= pair.power_per_dim() / 4.0,
    }
}
