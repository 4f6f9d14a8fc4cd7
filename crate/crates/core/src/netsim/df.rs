//! Decode-and-forward: the relay decodes the message triple and broadcasts a
//! codeword of a triple-indexed random codebook; each receiver decodes its
//! two neighbours in the first phase and its own message in the second.

use super::codebook::{argmin, gaussian_codebook, gaussian_codeword, power_per_symbol, sq_dist};
use super::rng::{codeword_rng, trial_rng, Purpose};
use super::topology::{bc_phase, mac_phase, Topology};
use super::{check_search, codebook_size, run_trials, CodeSummary, Report, SimConfig, SimError, Tally, TrialOutcome, POWER};
use crate::rates::df_exchange_optimal;
use rand::Rng;

pub(super) fn run(cfg: &SimConfig) -> Result<(Tally, Report), SimError> {
    let (rate, split) = df_exchange_optimal(cfg.snr);
    let m = codebook_size(cfg, rate.bits());
    check_search((m as u128).pow(3))?;
    let m = m as usize;
    let mac_len = ((cfg.dim as f64 * split.delta1()).round() as usize).max(1);
    let bc_len = ((cfg.dim as f64 * split.delta2()).round() as usize).max(1);
    let mac_noise = cfg.mac_noise();
    let bc_noise = cfg.bc_noise();

    let tally = run_trials(cfg.trials, |t| {
        let mut rng = trial_rng(cfg.seed, Purpose::Mac, t);
        let books: Vec<Vec<Vec<f64>>> = (0..3).map(|_| gaussian_codebook(&mut rng, m, mac_len, POWER)).collect();
        let w: [usize; 3] = std::array::from_fn(|_| rng.random_range(0..m));
        let x = [0, 1, 2].map(|i| books[i][w[i]].as_slice());
        let obs = mac_phase(x, &mac_noise, &mut rng);

        let relay_hat = decode_triple(&books, &obs.relay);
        let relay_cw = |triple: [usize; 3]| {
            let idx = ((triple[0] * m + triple[1]) * m + triple[2]) as u64;
            gaussian_codeword(&mut codeword_rng(cfg.seed, Purpose::RelayCodebook, t, idx), bc_len, POWER)
        };
        let x_r = relay_cw(relay_hat);
        let mut bc_rng = trial_rng(cfg.seed, Purpose::Broadcast, t);
        let y2 = bc_phase(&x_r, &bc_noise, &mut bc_rng);

        let mut out = TrialOutcome {
            relay_error: relay_hat != w,
            relay_message_errors: std::array::from_fn(|i| relay_hat[i] != w[i]),
            source_power: x.map(power_per_symbol),
            relay_power: power_per_symbol(&x_r),
            ..Default::default()
        };
        for i in 0..3 {
            let (j, k) = Topology::overheard(i);
            let (wj, wk) = decode_pair(&books[j], &books[k], &obs.receivers[i]);
            let own = argmin((0..m).map(|c| {
                let mut triple = [0; 3];
                triple[i] = c;
                triple[j] = wj;
                triple[k] = wk;
                sq_dist(&y2[i], &relay_cw(triple))
            }));
            out.receiver_errors[i] = own != w[i];
        }
        out
    });

    let bits = (m as f64).log2();
    Ok((
        tally,
        Report {
            relay: true,
            relay_messages: true,
            residual: false,
            relay_power: true,
            code: CodeSummary {
                codebook_size: Some(m as u64),
                codebook_bits: bits,
                rate: bits / (mac_len + bc_len) as f64,
                mac_uses: mac_len,
                bc_uses: bc_len,
                nesting_ratio: None,
                bc_feasible: None,
            },
        },
    ))
}

/// Joint ML over all `M³` message triples.
fn decode_triple(books: &[Vec<Vec<f64>>], y: &[f64]) -> [usize; 3] {
    let m = books[0].len();
    let mut best = ([0; 3], f64::INFINITY);
    let mut r = vec![0.0; y.len()];
    for a in 0..m {
        for b in 0..m {
            for t in 0..y.len() {
                r[t] = y[t] - books[0][a][t] - books[1][b][t];
            }
            for (c, x3) in books[2].iter().enumerate() {
                let d = sq_dist(&r, x3);
                if d < best.1 {
                    best = ([a, b, c], d);
                }
            }
        }
    }
    best.0
}

/// Joint ML over the `M²` pairs heard in the first phase.
fn decode_pair(first: &[Vec<f64>], second: &[Vec<f64>], y: &[f64]) -> (usize, usize) {
    let mut best = ((0, 0), f64::INFINITY);
    let mut r = vec![0.0; y.len()];
    for (a, xa) in first.iter().enumerate() {
        for t in 0..y.len() {
            r[t] = y[t] - xa[t];
        }
        for (b, xb) in second.iter().enumerate() {
            let d = sq_dist(&r, xb);
            if d < best.1 {
                best = ((a, b), d);
            }
        }
    }
    best.0
}
