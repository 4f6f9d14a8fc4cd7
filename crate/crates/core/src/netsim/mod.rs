//! Seeded Monte Carlo simulation of the three relaying strategies.
//!
//! All signals use unit power `P = 1` per complex symbol and noise
//! `N = 1 / snr`. Trials are independent; each draws from its own counter
//! stream (see [`rng`]) and trials are reduced in index order, so a given
//! [`SimConfig`] always produces the same [`StrategyResult`] no matter how
//! many worker threads run it.

pub mod channel;
mod codebook;
mod df;
mod af;
mod equivalent_noise;
mod lattice_sim;
pub mod rng;
pub mod stats;
pub mod topology;

pub use channel::NoiseModel;
pub use equivalent_noise::{measure_equivalent_noise, NoiseMeasurement};
pub use stats::ErrorStat;
pub use topology::Topology;

use crate::lattice::LatticeError;
use crate::snr::SnrPoint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Schema tag written with every serialized result.
pub const RESULT_SCHEMA: &str = "starnet/strategy-result/v1";

/// Upper limit on the size of any exhaustive maximum-likelihood search.
pub const ML_SEARCH_LIMIT: u64 = 1_000_000;

/// Trials per reduction chunk. Fixed so the floating-point summation order
/// never depends on the thread count.
const CHUNK: u64 = 256;

const POWER: f64 = 1.0;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("maximum-likelihood search over {size} candidates exceeds the limit of {limit}")]
    SearchTooLarge { size: u128, limit: u64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Df,
    Af,
    Lattice,
}

/// How the relay's lattice index reaches the receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcMode {
    /// Error-free whenever the broadcast rate condition holds, failure
    /// otherwise.
    #[default]
    Ideal,
    /// Random Gaussian codebook with exhaustive ML decoding.
    Coded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub strategy: Strategy,
    pub snr: SnrPoint,
    /// Real lattice dimensions (lattice) or total complex channel uses over
    /// both phases (DF, AF).
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    /// Fine-cell second moment over the MMSE noise floor (lattice only).
    pub margin: f64,
    /// Allow `margin < 1`.
    #[serde(default)]
    pub margin_override: bool,
    /// Per-message rate as a fraction of the closed-form rate (DF, AF).
    pub rate_fraction: f64,
    /// Fixed per-transmitter codebook size, replacing the rate-fraction rule
    /// (DF, AF).
    #[serde(default)]
    pub codebook_size: Option<u64>,
    #[serde(default)]
    pub bc_mode: BcMode,
    /// Remove noise from every link.
    #[serde(default)]
    pub noiseless: bool,
    /// Remove noise from the broadcast phase only.
    #[serde(default)]
    pub noiseless_bc: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            strategy: Strategy::Lattice,
            snr: SnrPoint::from_linear(10.0),
            dim: 64,
            trials: 10_000,
            seed: 0,
            margin: 2.0,
            margin_override: false,
            rate_fraction: 0.7,
            codebook_size: None,
            bc_mode: BcMode::Ideal,
            noiseless: false,
            noiseless_bc: false,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::Config(m));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !(self.snr.linear() > 0.0 && self.snr.linear().is_finite()) {
            return bad(format!("snr must be positive and finite, got {}", self.snr.linear()));
        }
        if !(self.rate_fraction > 0.0 && self.rate_fraction <= 1.0) {
            return bad(format!("rate fraction must lie in (0, 1], got {}", self.rate_fraction));
        }
        if self.codebook_size.is_some_and(|m| m < 2) {
            return bad("codebook size must be at least 2".into());
        }
        if self.dim == 0 {
            return bad("dimension / blocklength must be positive".into());
        }
        Ok(())
    }

    /// Nominal noise variance per complex symbol.
    fn noise_variance(&self) -> f64 {
        POWER / self.snr.linear()
    }

    fn mac_noise(&self) -> NoiseModel {
        if self.noiseless {
            NoiseModel::noiseless()
        } else {
            NoiseModel::new(self.noise_variance())
        }
    }

    fn bc_noise(&self) -> NoiseModel {
        if self.noiseless || self.noiseless_bc {
            NoiseModel::noiseless()
        } else {
            NoiseModel::new(self.noise_variance())
        }
    }
}

/// Mean transmit power per complex symbol over the whole campaign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    /// Largest of the three sources.
    pub source: f64,
    pub relay: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    /// Codewords per transmitter, when it fits in 64 bits.
    pub codebook_size: Option<u64>,
    /// `log2` of the codebook size.
    pub codebook_bits: f64,
    /// Per-message rate in bits per complex use, both phases counted.
    pub rate: f64,
    pub mac_uses: usize,
    pub bc_uses: usize,
    pub nesting_ratio: Option<u32>,
    /// Broadcast rate condition (lattice only).
    pub bc_feasible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyResult {
    pub schema: String,
    pub config: SimConfig,
    pub trials: u64,
    /// Own-message errors at each receiver.
    pub receivers: [ErrorStat; 3],
    /// Relay decoding errors (lattice: modular sum; DF: message triple).
    pub relay: Option<ErrorStat>,
    /// Per-message relay errors (DF only).
    pub relay_messages: Option<[ErrorStat; 3]>,
    /// Mean squared folded residual per real dimension at the relay (lattice
    /// only).
    pub residual_noise_power: Option<f64>,
    pub power: PowerReport,
    pub code: CodeSummary,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl StrategyResult {
    pub fn worst_receiver_rate(&self) -> f64 {
        self.receivers.iter().map(|s| s.rate).fold(0.0, f64::max)
    }
}

/// Outcome of a single trial.
#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    receiver_errors: [bool; 3],
    relay_error: bool,
    relay_message_errors: [bool; 3],
    residual: f64,
    source_power: [f64; 3],
    relay_power: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    receiver_errors: [u64; 3],
    relay_errors: u64,
    relay_message_errors: [u64; 3],
    residual: f64,
    source_power: [f64; 3],
    relay_power: f64,
}

impl Tally {
    fn add(&mut self, o: &TrialOutcome) {
        for i in 0..3 {
            self.receiver_errors[i] += o.receiver_errors[i] as u64;
            self.relay_message_errors[i] += o.relay_message_errors[i] as u64;
            self.source_power[i] += o.source_power[i];
        }
        self.relay_errors += o.relay_error as u64;
        self.residual += o.residual;
        self.relay_power += o.relay_power;
    }

    fn merge(mut self, other: &Tally) -> Tally {
        for i in 0..3 {
            self.receiver_errors[i] += other.receiver_errors[i];
            self.relay_message_errors[i] += other.relay_message_errors[i];
            self.source_power[i] += other.source_power[i];
        }
        self.relay_errors += other.relay_errors;
        self.residual += other.residual;
        self.relay_power += other.relay_power;
        self
    }
}

/// Runs `trial` for every index and reduces in a scheduling-independent order.
fn run_trials<F>(trials: u64, trial: F) -> Tally
where
    F: Fn(u64) -> TrialOutcome + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partial: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                tally.add(&trial(t));
            }
            tally
        })
        .collect();
    partial.iter().fold(Tally::default(), |acc, t| acc.merge(t))
}

/// Parts of a result specific to each strategy.
struct Report {
    relay: bool,
    relay_messages: bool,
    residual: bool,
    relay_power: bool,
    code: CodeSummary,
}

fn assemble(cfg: &SimConfig, tally: Tally, report: Report, elapsed: Duration) -> StrategyResult {
    let n = cfg.trials;
    let nf = n as f64;
    StrategyResult {
        schema: RESULT_SCHEMA.to_string(),
        config: cfg.clone(),
        trials: n,
        receivers: tally.receiver_errors.map(|e| ErrorStat::new(e, n)),
        relay: report.relay.then(|| ErrorStat::new(tally.relay_errors, n)),
        relay_messages: report
            .relay_messages
            .then(|| tally.relay_message_errors.map(|e| ErrorStat::new(e, n))),
        residual_noise_power: report.residual.then(|| tally.residual / nf),
        power: PowerReport {
            source: tally.source_power.iter().map(|p| p / nf).fold(0.0, f64::max),
            relay: report.relay_power.then(|| tally.relay_power / nf),
        },
        code: report.code,
        elapsed,
    }
}

/// Run a campaign on the global rayon pool.
pub fn run(cfg: &SimConfig) -> Result<StrategyResult, SimError> {
    cfg.validate()?;
    let start = Instant::now();
    let (tally, report) = match cfg.strategy {
        Strategy::Lattice => lattice_sim::run(cfg)?,
        Strategy::Af => af::run(cfg)?,
        Strategy::Df => df::run(cfg)?,
    };
    Ok(assemble(cfg, tally, report, start.elapsed()))
}

/// Run a campaign on a dedicated pool of `workers` threads.
pub fn run_with_workers(cfg: &SimConfig, workers: usize) -> Result<StrategyResult, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    pool.install(|| run(cfg))
}

pub fn run_lattice_trials(cfg: &SimConfig) -> Result<StrategyResult, SimError> {
    expect_strategy(cfg, Strategy::Lattice)?;
    run(cfg)
}

pub fn run_af_trials(cfg: &SimConfig) -> Result<StrategyResult, SimError> {
    expect_strategy(cfg, Strategy::Af)?;
    run(cfg)
}

pub fn run_df_trials(cfg: &SimConfig) -> Result<StrategyResult, SimError> {
    expect_strategy(cfg, Strategy::Df)?;
    run(cfg)
}

fn expect_strategy(cfg: &SimConfig, s: Strategy) -> Result<(), SimError> {
    if cfg.strategy != s {
        return Err(SimError::Config(format!(
            "expected strategy {s:?}, got {:?}",
            cfg.strategy
        )));
    }
    Ok(())
}

/// Codebook size `max(2, floor(2^(n · fraction · rate)))` unless overridden.
fn codebook_size(cfg: &SimConfig, closed_form_rate: f64) -> u64 {
    cfg.codebook_size.unwrap_or_else(|| {
        let bits = cfg.dim as f64 * cfg.rate_fraction * closed_form_rate;
        (bits.exp2().floor() as u64).max(2)
    })
}

fn check_search(size: u128) -> Result<(), SimError> {
    if size > ML_SEARCH_LIMIT as u128 {
        return Err(SimError::SearchTooLarge {
            size,
            limit: ML_SEARCH_LIMIT,
        });
    }
    Ok(())
}
