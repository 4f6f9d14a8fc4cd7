//! Dithered nested-lattice codec over cubic lattices.
//!
//! The coarse lattice is `q Z^n` and the fine lattice `s Z^n` with
//! `q = M s` for an integer nesting ratio `M`. Codewords are fine points in
//! the half-open coarse cell `[-q/2, q/2)^n`; they are stored as integer fine
//! coordinates so that the modular group arithmetic is exact. Real vectors
//! (transmit and receive signals) are plain `f64` slices of length `dim`, two
//! real dimensions per complex channel use.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("lattice dimension must be a positive even number, got {0}")]
    InvalidDimension(usize),
    #[error("power and noise must be positive and finite (P = {power}, N = {noise})")]
    InvalidPower { power: f64, noise: f64 },
    #[error("number of summands must be 2 or 3, got {0}")]
    InvalidSummands(u32),
    #[error("margin must be finite and at least 1 (got {0}); sub-unit margins need an explicit override")]
    InvalidMargin(f64),
    #[error("rate underflow: nesting ratio {ratio:.4} < 2, no code fits the noise floor")]
    RateUnderflow { ratio: f64 },
    #[error("invalid lattice pair: coarse step {coarse_step}, nesting ratio {nesting_ratio}")]
    InvalidPair { coarse_step: f64, nesting_ratio: u32 },
    #[error("message index out of range for a codebook of {nesting_ratio}^{dim} words")]
    MessageOutOfRange { nesting_ratio: u32, dim: usize },
}

/// How the nesting ratio is rounded from its real-valued target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NestingRounding {
    /// Never exceed the noise-imposed bound.
    #[default]
    Floor,
    /// Stress setting: one step above the bound whenever the target is not
    /// an integer.
    Ceil,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BuildOptions {
    pub rounding: NestingRounding,
    /// Accept `margin < 1`, i.e. a fine cell smaller than the noise floor.
    pub allow_sub_unit_margin: bool,
}

/// A cubic nested lattice pair `q Z^n ⊂ (q/M) Z^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedLatticePair {
    dim: usize,
    coarse_step: f64,
    nesting_ratio: u32,
}

/// Integer fine coordinates of a codeword, each in `[-floor(M/2), ceil(M/2))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeCodeword {
    coords: Vec<i64>,
}

/// Message as base-`M` digits, least significant first (one per dimension).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MessageIndex {
    digits: Vec<u32>,
}

/// Uniform offset over the coarse cell, shared with every decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct Dither {
    values: Vec<f64>,
}

/// `k P / (k P + N)`: the scaling that minimises the equivalent noise when
/// `k` signals of power `P` are summed.
pub fn mmse_gamma(summands: u32, power: f64, noise: f64) -> f64 {
    let kp = summands as f64 * power;
    kp / (kp + noise)
}

/// `γ² N + k P (1 - γ)²`.
pub fn equivalent_noise_power(gamma: f64, summands: u32, power: f64, noise: f64) -> f64 {
    gamma * gamma * noise + summands as f64 * power * (1.0 - gamma) * (1.0 - gamma)
}

/// Minimum of [`equivalent_noise_power`], `k P N / (k P + N)`.
pub fn optimal_noise_power(summands: u32, power: f64, noise: f64) -> f64 {
    let kp = summands as f64 * power;
    kp * noise / (kp + noise)
}

/// Design a pair for `dim` real dimensions carrying signals of power `power`
/// per complex symbol over noise `noise` per complex symbol, decodable when
/// `summands` codewords are added.
///
/// Power and noise are split evenly over the two real components. The fine
/// cell is sized to `margin` times the MMSE noise floor.
pub fn build_pair(
    dim: usize,
    power: f64,
    noise: f64,
    summands: u32,
    margin: f64,
) -> Result<NestedLatticePair, LatticeError> {
    build_pair_with(dim, power, noise, summands, margin, BuildOptions::default())
}

pub fn build_pair_with(
    dim: usize,
    power: f64,
    noise: f64,
    summands: u32,
    margin: f64,
    opts: BuildOptions,
) -> Result<NestedLatticePair, LatticeError> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(LatticeError::InvalidDimension(dim));
    }
    let valid = |x: f64| x.is_finite() && x > 0.0;
    if !valid(power) || !valid(noise) {
        return Err(LatticeError::InvalidPower { power, noise });
    }
    if !(2..=3).contains(&summands) {
        return Err(LatticeError::InvalidSummands(summands));
    }
    if !margin.is_finite() || margin <= 0.0 || (margin < 1.0 && !opts.allow_sub_unit_margin) {
        return Err(LatticeError::InvalidMargin(margin));
    }
    let p_dim = power / 2.0;
    let n_dim = noise / 2.0;
    let coarse_step = (12.0 * p_dim).sqrt();
    let floor_dim = optimal_noise_power(summands, p_dim, n_dim);
    let ratio = coarse_step / (12.0 * margin * floor_dim).sqrt();
    let rounded = match opts.rounding {
        NestingRounding::Floor => ratio.floor(),
        NestingRounding::Ceil => ratio.ceil(),
    };
    if rounded < 2.0 {
        return Err(LatticeError::RateUnderflow { ratio });
    }
    if rounded > u32::MAX as f64 {
        return Err(LatticeError::InvalidPair {
            coarse_step,
            nesting_ratio: u32::MAX,
        });
    }
    NestedLatticePair::new(dim, coarse_step, rounded as u32)
}

impl NestedLatticePair {
    pub fn new(
        dim: usize,
        coarse_step: f64,
        nesting_ratio: u32,
    ) -> Result<NestedLatticePair, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::InvalidDimension(dim));
        }
        if !(coarse_step.is_finite() && coarse_step > 0.0) || nesting_ratio == 0 {
            return Err(LatticeError::InvalidPair {
                coarse_step,
                nesting_ratio,
            });
        }
        Ok(NestedLatticePair {
            dim,
            coarse_step,
            nesting_ratio,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coarse_step(&self) -> f64 {
        self.coarse_step
    }

    #[inline]
    pub fn nesting_ratio(&self) -> u32 {
        self.nesting_ratio
    }

    #[inline]
    pub fn fine_step(&self) -> f64 {
        self.coarse_step / self.nesting_ratio as f64
    }

    /// Second moment of the coarse cell per dimension, `q² / 12`.
    pub fn power_per_dim(&self) -> f64 {
        self.coarse_step * self.coarse_step / 12.0
    }

    pub fn fine_second_moment(&self) -> f64 {
        let s = self.fine_step();
        s * s / 12.0
    }

    /// Bits per complex channel use, `2 log2 M`.
    pub fn rate_per_complex_use(&self) -> f64 {
        2.0 * (self.nesting_ratio as f64).log2()
    }

    /// `log2` of the codebook size, `dim log2 M`.
    pub fn codebook_bits(&self) -> f64 {
        self.dim as f64 * (self.nesting_ratio as f64).log2()
    }

    /// Codebook size if it fits in a `u64`.
    pub fn codebook_size(&self) -> Option<u64> {
        (self.nesting_ratio as u64).checked_pow(self.dim.try_into().ok()?)
    }

    /// Lowest centred fine coordinate, `-floor(M/2)`.
    #[inline]
    fn lowest(&self) -> i64 {
        -((self.nesting_ratio / 2) as i64)
    }

    #[inline]
    fn reduce(&self, j: i64) -> i64 {
        let lo = self.lowest();
        (j - lo).rem_euclid(self.nesting_ratio as i64) + lo
    }

    /// Reduce a real vector to its representative in `[-q/2, q/2)^n`.
    pub fn mod_coarse(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.mod_coarse_scalar(v)).collect()
    }

    fn mod_coarse_scalar(&self, x: f64) -> f64 {
        let q = self.coarse_step;
        let half = q / 2.0;
        let mut k = (x / q + 0.5).floor();
        let mut r = x - k * q;
        // x / q can round across a cell boundary; nudge the shift back.
        if r >= half {
            k += 1.0;
            r = x - k * q;
        } else if r < -half {
            k -= 1.0;
            r = x - k * q;
        }
        r
    }

    /// Nearest fine point, reduced into the coarse cell. Midpoints go to the
    /// lower neighbour.
    pub fn quantize_fine(&self, x: &[f64]) -> LatticeCodeword {
        let s = self.fine_step();
        LatticeCodeword {
            coords: x
                .iter()
                .map(|&v| self.reduce((v / s - 0.5).ceil() as i64))
                .collect(),
        }
    }

    pub fn codeword(&self, msg: &MessageIndex) -> LatticeCodeword {
        debug_assert_eq!(msg.digits.len(), self.dim);
        LatticeCodeword {
            coords: msg.digits.iter().map(|&d| self.reduce(d as i64)).collect(),
        }
    }

    pub fn message(&self, cw: &LatticeCodeword) -> MessageIndex {
        MessageIndex {
            digits: cw
                .coords
                .iter()
                .map(|&j| j.rem_euclid(self.nesting_ratio as i64) as u32)
                .collect(),
        }
    }

    pub fn point(&self, cw: &LatticeCodeword) -> Vec<f64> {
        let s = self.fine_step();
        cw.coords.iter().map(|&j| j as f64 * s).collect()
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> MessageIndex {
        MessageIndex {
            digits: (0..self.dim)
                .map(|_| rng.random_range(0..self.nesting_ratio))
                .collect(),
        }
    }

    pub fn random_dither<R: Rng + ?Sized>(&self, rng: &mut R) -> Dither {
        let q = self.coarse_step;
        Dither {
            values: (0..self.dim)
                .map(|_| self.mod_coarse_scalar((rng.random::<f64>() - 0.5) * q))
                .collect(),
        }
    }

    /// Transmit signal `(c - d) mod Λ`.
    pub fn encode(&self, msg: &MessageIndex, dither: &Dither) -> Vec<f64> {
        self.encode_codeword(&self.codeword(msg), dither)
    }

    pub fn encode_codeword(&self, cw: &LatticeCodeword, dither: &Dither) -> Vec<f64> {
        let s = self.fine_step();
        cw.coords
            .iter()
            .zip(&dither.values)
            .map(|(&j, &d)| self.mod_coarse_scalar(j as f64 * s - d))
            .collect()
    }

    /// Estimate of `(Σ c_i) mod Λ` from `γ y + Σ d_i`, where `y` is the
    /// superposition of the transmit signals belonging to `dithers`.
    pub fn sum_decode(&self, received: &[f64], dithers: &[&Dither], gamma: f64) -> LatticeCodeword {
        self.quantize_fine(&self.dithered_observation(received, dithers, gamma))
    }

    /// `(γ y + Σ d_i) mod Λ`, the input to the fine quantiser.
    pub fn dithered_observation(&self, received: &[f64], dithers: &[&Dither], gamma: f64) -> Vec<f64> {
        (0..self.dim)
            .map(|t| {
                let v = gamma * received[t] + dithers.iter().map(|d| d.values[t]).sum::<f64>();
                self.mod_coarse_scalar(v)
            })
            .collect()
    }

    /// `(a + b) mod Λ`.
    pub fn add(&self, a: &LatticeCodeword, b: &LatticeCodeword) -> LatticeCodeword {
        LatticeCodeword {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.reduce(x + y))
                .collect(),
        }
    }

    /// `(a - b) mod Λ`.
    pub fn sub(&self, a: &LatticeCodeword, b: &LatticeCodeword) -> LatticeCodeword {
        LatticeCodeword {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.reduce(x - y))
                .collect(),
        }
    }

    /// Recover the own codeword from the relay's modular sum and the
    /// side-information sum of the other two.
    pub fn extract_own(&self, relay_sum: &LatticeCodeword, others_sum: &LatticeCodeword) -> LatticeCodeword {
        self.sub(relay_sum, others_sum)
    }

    pub fn zero(&self) -> LatticeCodeword {
        LatticeCodeword {
            coords: vec![0; self.dim],
        }
    }
}

impl LatticeCodeword {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl MessageIndex {
    pub fn from_digits(digits: Vec<u32>, pair: &NestedLatticePair) -> Result<MessageIndex, LatticeError> {
        if digits.len() != pair.dim || digits.iter().any(|&d| d >= pair.nesting_ratio) {
            return Err(LatticeError::MessageOutOfRange {
                nesting_ratio: pair.nesting_ratio,
                dim: pair.dim,
            });
        }
        Ok(MessageIndex { digits })
    }

    pub fn from_u128(mut value: u128, pair: &NestedLatticePair) -> Result<MessageIndex, LatticeError> {
        let m = pair.nesting_ratio as u128;
        let digits = (0..pair.dim)
            .map(|_| {
                let d = (value % m) as u32;
                value /= m;
                d
            })
            .collect();
        if value != 0 {
            return Err(LatticeError::MessageOutOfRange {
                nesting_ratio: pair.nesting_ratio,
                dim: pair.dim,
            });
        }
        Ok(MessageIndex { digits })
    }

    /// Integer value, `None` on overflow.
    pub fn to_u128(&self, pair: &NestedLatticePair) -> Option<u128> {
        let m = pair.nesting_ratio as u128;
        self.digits
            .iter()
            .rev()
            .try_fold(0u128, |acc, &d| acc.checked_mul(m)?.checked_add(d as u128))
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }
}

impl Dither {
    /// # Panics
    ///
    /// Panics if a value lies outside the coarse cell.
    pub fn from_values(values: Vec<f64>, pair: &NestedLatticePair) -> Dither {
        let half = pair.coarse_step / 2.0;
        assert!(values.len() == pair.dim);
        assert!(values.iter().all(|v| (-half..half).contains(v)), "dither outside the coarse cell");
        Dither { values }
    }

    pub fn zero(pair: &NestedLatticePair) -> Dither {
        Dither {
            values: vec![0.0; pair.dim],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(dim: usize, m: u32) -> NestedLatticePair {
        NestedLatticePair::new(dim, 6f64.sqrt(), m).unwrap()
    }

    /// Every codeword of a small pair, enumerated by integer index.
    fn all_codewords(p: &NestedLatticePair) -> Vec<LatticeCodeword> {
        (0..p.codebook_size().unwrap() as u128)
            .map(|v| p.codeword(&MessageIndex::from_u128(v, p).unwrap()))
            .collect()
    }

    #[test]
    fn build_pair_snr10_three_summands() {
        let p = build_pair(2, 10.0, 1.0, 3, 1.0).unwrap();
        // (P/2) / Ñ*_d = 1/3 + snr
        let target = p.power_per_dim() / optimal_noise_power(3, 5.0, 0.5);
        assert!((target - 31.0 / 3.0).abs() < 1e-12);
        assert_eq!(p.nesting_ratio(), 3);
        assert_eq!(p.codebook_size(), Some(9));
        assert!((p.power_per_dim() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn build_pair_two_summands_target() {
        let target = 5.0 / optimal_noise_power(2, 5.0, 0.5);
        assert!((target - 10.5).abs() < 1e-12);
        assert_eq!(build_pair(2, 10.0, 1.0, 2, 1.0).unwrap().nesting_ratio(), 3);
    }

    #[test]
    fn build_pair_underflows_at_threshold() {
        let err = build_pair(2, 2.0, 3.0, 3, 1.0).unwrap_err();
        assert!(matches!(err, LatticeError::RateUnderflow { ratio } if (ratio - 1.0).abs() < 1e-12));
    }

    #[test]
    fn build_pair_validation() {
        assert_eq!(build_pair(3, 1.0, 1.0, 3, 1.0), Err(LatticeError::InvalidDimension(3)));
        assert_eq!(build_pair(0, 1.0, 1.0, 3, 1.0), Err(LatticeError::InvalidDimension(0)));
        assert_eq!(build_pair(2, 1.0, 1.0, 4, 1.0), Err(LatticeError::InvalidSummands(4)));
        assert!(matches!(build_pair(2, 0.0, 1.0, 3, 1.0), Err(LatticeError::InvalidPower { .. })));
        assert_eq!(build_pair(2, 10.0, 1.0, 3, 0.5), Err(LatticeError::InvalidMargin(0.5)));
        let opts = BuildOptions {
            allow_sub_unit_margin: true,
            ..Default::default()
        };
        assert_eq!(build_pair_with(2, 10.0, 1.0, 3, 0.5, opts).unwrap().nesting_ratio(), 4);
    }

    #[test]
    fn build_pair_ceil_rounding() {
        let opts = BuildOptions {
            rounding: NestingRounding::Ceil,
            ..Default::default()
        };
        assert_eq!(build_pair_with(2, 10.0, 1.0, 3, 1.0, opts).unwrap().nesting_ratio(), 4);
    }

    #[test]
    fn second_moment_ratio() {
        let p = pair(4, 7);
        assert!((p.power_per_dim() / p.fine_second_moment() - 49.0).abs() < 1e-9);
        assert!((p.coarse_step() / p.fine_step() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn rate_never_exceeds_lattice_bound() {
        for snr in [0.7, 1.0, 2.5, 10.0, 31.0, 1e3, 1e5] {
            if let Ok(p) = build_pair(2, snr, 1.0, 3, 1.0) {
                assert!(p.rate_per_complex_use() <= (1.0 / 3.0 + snr).log2() + 1e-12);
            }
        }
    }

    #[test]
    fn mod_coarse_examples() {
        let p = pair(2, 4);
        let q = p.coarse_step();
        assert_eq!(p.mod_coarse(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert_eq!(p.mod_coarse(&[q, -q / 2.0]), vec![0.0, -q / 2.0]);
        assert_eq!(p.mod_coarse(&[q / 2.0])[0], -q / 2.0);
        assert!((p.mod_coarse(&[1.3 * q])[0] - 0.3 * q).abs() < 1e-12);
    }

    #[test]
    fn quantize_examples() {
        let p = pair(2, 5);
        let s = p.fine_step();
        let cw = p.codeword(&MessageIndex::from_digits(vec![1, 4], &p).unwrap());
        let pt = p.point(&cw);
        assert_eq!(p.quantize_fine(&pt), cw);
        let nudged: Vec<f64> = pt.iter().map(|v| v + 0.49 * s).collect();
        assert_eq!(p.quantize_fine(&nudged), cw);
        let nudged: Vec<f64> = pt.iter().map(|v| v - 0.49 * s).collect();
        assert_eq!(p.quantize_fine(&nudged), cw);
        // midpoint between 0 and s goes down
        assert_eq!(p.quantize_fine(&[0.5 * s, -0.5 * s]).coords(), &[0, -1]);
    }

    #[test]
    fn encode_with_zero_dither_is_codeword() {
        let p = pair(4, 3);
        for cw in all_codewords(&p) {
            assert_eq!(p.encode_codeword(&cw, &Dither::zero(&p)), p.point(&cw));
        }
    }

    #[test]
    fn encode_zero_codeword_negates_dither() {
        let p = pair(2, 3);
        let d = Dither::from_values(vec![0.4, -1.1], &p);
        assert_eq!(p.encode_codeword(&p.zero(), &d), p.mod_coarse(&[-0.4, 1.1]));
    }

    #[test]
    fn encode_mean_power_matches_cell_moment() {
        let p = pair(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let x = p.encode(&p.random_message(&mut rng), &p.random_dither(&mut rng));
            acc += x.iter().map(|v| v * v).sum::<f64>() / 2.0;
        }
        let mean = acc / n as f64;
        assert!((mean / p.power_per_dim() - 1.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn dithered_output_is_uniform() {
        // Kolmogorov-Smirnov distance against U[-q/2, q/2) per coordinate.
        let p = pair(2, 3);
        let q = p.coarse_step();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mut cols = vec![Vec::with_capacity(n), Vec::with_capacity(n)];
        for _ in 0..n {
            let x = p.encode(&p.random_message(&mut rng), &p.random_dither(&mut rng));
            cols[0].push(x[0]);
            cols[1].push(x[1]);
        }
        for mut col in cols {
            col.sort_by(f64::total_cmp);
            let ks = col
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let cdf = v / q + 0.5;
                    (cdf - i as f64 / n as f64).abs().max((cdf - (i + 1) as f64 / n as f64).abs())
                })
                .fold(0.0, f64::max);
            assert!(ks < 0.01, "ks = {ks}");
        }
    }

    #[test]
    fn gamma_and_noise_examples() {
        assert_eq!(mmse_gamma(3, 1.0, 1.0), 0.75);
        assert_eq!(mmse_gamma(3, 1.0, 0.0), 1.0);
        assert!((mmse_gamma(2, 1.0, 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(equivalent_noise_power(1.0, 3, 2.0, 0.7), 0.7);
        assert_eq!(equivalent_noise_power(0.0, 3, 2.0, 0.7), 6.0);
        assert_eq!(equivalent_noise_power(0.75, 3, 1.0, 1.0), 0.75);
        assert_eq!(optimal_noise_power(3, 1.0, 1.0), 0.75);
    }

    #[test]
    fn gamma_minimises_equivalent_noise() {
        for (k, p, n) in [(3, 1.0, 1.0), (2, 5.0, 0.5), (3, 0.3, 2.0)] {
            let g = mmse_gamma(k, p, n);
            let best = equivalent_noise_power(g, k, p, n);
            assert!((best - optimal_noise_power(k, p, n)).abs() < 1e-12);
            for dg in [-0.01, 0.01] {
                assert!(equivalent_noise_power(g + dg, k, p, n) > best);
            }
        }
    }

    #[test]
    fn noiseless_sum_decode_recovers_modular_sum() {
        let p = pair(8, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let c: Vec<_> = (0..3).map(|_| p.codeword(&p.random_message(&mut rng))).collect();
            let d: Vec<_> = (0..3).map(|_| p.random_dither(&mut rng)).collect();
            let x: Vec<_> = (0..3).map(|i| p.encode_codeword(&c[i], &d[i])).collect();
            let y3: Vec<f64> = (0..8).map(|t| x[0][t] + x[1][t] + x[2][t]).collect();
            let y2: Vec<f64> = (0..8).map(|t| x[1][t] + x[2][t]).collect();
            let relay = p.sum_decode(&y3, &[&d[0], &d[1], &d[2]], 1.0);
            let side = p.sum_decode(&y2, &[&d[1], &d[2]], 1.0);
            assert_eq!(relay, p.add(&p.add(&c[0], &c[1]), &c[2]));
            assert_eq!(side, p.add(&c[1], &c[2]));
            assert_eq!(p.extract_own(&relay, &side), c[0]);
        }
    }

    #[test]
    fn extract_with_zero_side_information() {
        let p = pair(4, 3);
        for cw in all_codewords(&p) {
            assert_eq!(p.extract_own(&cw, &p.zero()), cw);
        }
    }

    #[test]
    fn exhaustive_round_trip_nine_word_codebook() {
        let p = build_pair(2, 10.0, 1.0, 3, 1.0).unwrap();
        assert_eq!(p.codebook_size(), Some(9));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for w1 in 0..9u128 {
            let m1 = MessageIndex::from_u128(w1, &p).unwrap();
            let m2 = p.random_message(&mut rng);
            let m3 = p.random_message(&mut rng);
            let d: Vec<_> = (0..3).map(|_| p.random_dither(&mut rng)).collect();
            let x1 = p.encode(&m1, &d[0]);
            let x2 = p.encode(&m2, &d[1]);
            let x3 = p.encode(&m3, &d[2]);
            let yr: Vec<f64> = (0..2).map(|t| x1[t] + x2[t] + x3[t]).collect();
            let yb: Vec<f64> = (0..2).map(|t| x2[t] + x3[t]).collect();
            let cr = p.sum_decode(&yr, &[&d[0], &d[1], &d[2]], 1.0);
            let side = p.sum_decode(&yb, &[&d[1], &d[2]], 1.0);
            let own = p.message(&p.extract_own(&cr, &side));
            assert_eq!(own.to_u128(&p), Some(w1));
        }
    }

    #[test]
    fn group_closure_and_associativity_exhaustive() {
        for m in [2, 3, 4] {
            let p = pair(2, m);
            let words = all_codewords(&p);
            let set: std::collections::HashSet<_> = words.iter().cloned().collect();
            for a in &words {
                for b in &words {
                    let sum = p.add(a, b);
                    assert!(set.contains(&sum));
                    let pt: Vec<f64> = p.point(a).iter().zip(p.point(b)).map(|(x, y)| x + y).collect();
                    assert_eq!(p.quantize_fine(&p.mod_coarse(&pt)), sum);
                    for c in &words {
                        assert_eq!(p.add(&sum, c), p.add(a, &p.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn message_codeword_bijection() {
        for dim in 1..=4 {
            for m in 1..=8 {
                let p = pair(dim, m);
                let size = p.codebook_size().unwrap() as u128;
                let mut seen = std::collections::HashSet::new();
                for v in 0..size {
                    let cw = p.codeword(&MessageIndex::from_u128(v, &p).unwrap());
                    assert!(p.mod_coarse(&p.point(&cw)) == p.point(&cw));
                    assert_eq!(p.message(&cw).to_u128(&p), Some(v));
                    assert!(seen.insert(cw));
                }
                assert!(MessageIndex::from_u128(size, &p).is_err());
            }
        }
    }

    #[test]
    fn codeword_points_inside_cell() {
        for m in [2, 3, 4, 7] {
            let p = pair(1, m);
            let half = p.coarse_step() / 2.0;
            for cw in all_codewords(&p) {
                let x = p.point(&cw)[0];
                assert!((-half..half).contains(&x), "m={m} x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn mod_coarse_idempotent_and_periodic(
            x in prop::collection::vec(-1e4f64..1e4, 3),
            shift in prop::collection::vec(-50i64..50, 3),
        ) {
            let p = pair(3, 5);
            let q = p.coarse_step();
            let r = p.mod_coarse(&x);
            prop_assert!(r.iter().all(|v| (-q / 2.0..q / 2.0).contains(v)));
            prop_assert_eq!(p.mod_coarse(&r), r.clone());
            let moved: Vec<f64> = x.iter().zip(&shift).map(|(v, k)| v + *k as f64 * q).collect();
            let r2 = p.mod_coarse(&moved);
            for (a, b) in r.iter().zip(&r2) {
                // periodic up to rounding of the shifted input
                prop_assert!((a - b).abs() < 1e-9 || (q - (a - b).abs()).abs() < 1e-9);
            }
        }

        #[test]
        fn quantize_idempotent(x in prop::collection::vec(-100f64..100.0, 4)) {
            let p = pair(4, 6);
            let cw = p.quantize_fine(&x);
            prop_assert_eq!(p.quantize_fine(&p.point(&cw)), cw);
        }
    }
}
