//! Amplify-and-forward: the relay rescales its reception to power `P`; each
//! receiver runs joint ML over all message triples using both of its
//! observations and keeps the first (own) element.

use super::codebook::{gaussian_codebook, power_per_symbol, sq_dist};
use super::rng::{trial_rng, Purpose};
use super::topology::{bc_phase, mac_phase, Topology};
use super::{check_search, codebook_size, run_trials, CodeSummary, Report, SimConfig, SimError, Tally, TrialOutcome, POWER};
use crate::rates::af_exchange;
use rand::Rng;

pub(super) fn run(cfg: &SimConfig) -> Result<(Tally, Report), SimError> {
    if cfg.dim < 2 {
        return Err(SimError::Config("AF needs a blocklength of at least 2".into()));
    }
    let m = codebook_size(cfg, af_exchange(cfg.snr).bits());
    check_search((m as u128).pow(3))?;
    let m = m as usize;
    let len = cfg.dim / 2;
    let mac_noise = cfg.mac_noise();
    let bc_noise = cfg.bc_noise();
    let noise = if cfg.noiseless { 0.0 } else { cfg.noise_variance() };
    let gain = (POWER / (3.0 * POWER + noise)).sqrt();
    // Noise of the second observation is α Z_r + Z_b: (1 + α²) N.
    let second_weight = 1.0 / (1.0 + gain * gain);

    let tally = run_trials(cfg.trials, |t| {
        let mut rng = trial_rng(cfg.seed, Purpose::Mac, t);
        let books: Vec<Vec<Vec<f64>>> = (0..3).map(|_| gaussian_codebook(&mut rng, m, len, POWER)).collect();
        let w: [usize; 3] = std::array::from_fn(|_| rng.random_range(0..m));
        let x = [0, 1, 2].map(|i| books[i][w[i]].as_slice());
        let obs = mac_phase(x, &mac_noise, &mut rng);
        let x_r: Vec<f64> = obs.relay.iter().map(|v| gain * v).collect();
        let mut bc_rng = trial_rng(cfg.seed, Purpose::Broadcast, t);
        let y2 = bc_phase(&x_r, &bc_noise, &mut bc_rng);

        let mut out = TrialOutcome {
            source_power: x.map(power_per_symbol),
            relay_power: power_per_symbol(&x_r),
            ..Default::default()
        };
        for i in 0..3 {
            let (j, k) = Topology::overheard(i);
            let own = decode_own(
                [&books[i], &books[j], &books[k]],
                &obs.receivers[i],
                &y2[i],
                gain,
                second_weight,
            );
            out.receiver_errors[i] = own != w[i];
        }
        out
    });

    let bits = (m as f64).log2();
    Ok((
        tally,
        Report {
            relay: false,
            relay_messages: false,
            residual: false,
            relay_power: true,
            code: CodeSummary {
                codebook_size: Some(m as u64),
                codebook_bits: bits,
                rate: bits / (2 * len) as f64,
                mac_uses: len,
                bc_uses: len,
                nesting_ratio: None,
                bc_feasible: None,
            },
        },
    ))
}

/// Minimises `|y1 - x_j - x_k|² + |y2 - α(x_i + x_j + x_k)|² / (1 + α²)`,
/// which is `N` times the negative log-likelihood, and returns the own index.
fn decode_own(books: [&Vec<Vec<f64>>; 3], y1: &[f64], y2: &[f64], gain: f64, second_weight: f64) -> usize {
    let [own, first, second] = books;
    let len = y1.len();
    let mut best = (0, f64::INFINITY);
    let mut side = vec![0.0; len];
    let mut resid = vec![0.0; len];
    for xb in first {
        for xc in second {
            for t in 0..len {
                side[t] = xb[t] + xc[t];
                resid[t] = y2[t] - gain * side[t];
            }
            let d1 = sq_dist(y1, &side);
            if d1 >= best.1 {
                continue;
            }
            for (a, xa) in own.iter().enumerate() {
                let d2: f64 = resid.iter().zip(xa).map(|(r, x)| (r - gain * x) * (r - gain * x)).sum();
                let d = d1 + second_weight * d2;
                if d < best.1 {
                    best = (a, d);
                }
            }
        }
    }
    best.0
}
