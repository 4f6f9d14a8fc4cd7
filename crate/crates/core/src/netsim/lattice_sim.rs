//! Lattice strategy: the relay decodes the modular sum of the three
//! codewords, the receivers decode the sum of their two neighbours, and each
//! receiver removes that side information from the relay's broadcast by
//! modular subtraction.

use super::codebook::{argmin, gaussian_codeword, power_per_symbol, sq_dist};
use super::rng::{codeword_rng, trial_rng, Purpose};
use super::topology::{bc_phase, mac_phase, Topology};
use super::{check_search, run_trials, BcMode, CodeSummary, Report, SimConfig, SimError, Tally, TrialOutcome, POWER};
use crate::lattice::{build_pair_with, mmse_gamma, BuildOptions, LatticeCodeword, MessageIndex};
use crate::rates::lattice_exchange_optimal;

pub(super) fn run(cfg: &SimConfig) -> Result<(Tally, Report), SimError> {
    let noise = cfg.noise_variance();
    let opts = BuildOptions {
        allow_sub_unit_margin: cfg.margin_override,
        ..Default::default()
    };
    let pair = build_pair_with(cfg.dim, POWER, noise, 3, cfg.margin, opts)?;
    let dim = pair.dim();
    let mac_uses = dim / 2;

    // Broadcast sizing follows the optimal phase split for this SNR.
    let (_, split) = lattice_exchange_optimal(cfg.snr);
    let bc_capacity = (1.0 + cfg.snr.linear()).log2();
    let bc_feasible = split.delta1() * pair.rate_per_complex_use() <= split.delta2() * bc_capacity;
    let bc_uses = ((mac_uses as f64 * split.delta2() / split.delta1()).ceil() as usize).max(1);

    let coded_size = match cfg.bc_mode {
        BcMode::Ideal => None,
        BcMode::Coded => {
            let size = pair.codebook_size().map_or(u128::MAX, u128::from);
            check_search(size)?;
            Some(size as usize)
        }
    };

    let sim_noise = if cfg.noiseless { 0.0 } else { noise };
    let gamma_relay = mmse_gamma(3, POWER, sim_noise);
    let gamma_side = mmse_gamma(2, POWER, sim_noise);
    let mac_noise = cfg.mac_noise();
    let bc_noise = cfg.bc_noise();

    let tally = run_trials(cfg.trials, |t| {
        let mut rng = trial_rng(cfg.seed, Purpose::Mac, t);
        let msgs: [MessageIndex; 3] = std::array::from_fn(|_| pair.random_message(&mut rng));
        let dithers = [0, 1, 2].map(|_| pair.random_dither(&mut rng));
        let c = [0, 1, 2].map(|i| pair.codeword(&msgs[i]));
        let x = [0, 1, 2].map(|i| pair.encode_codeword(&c[i], &dithers[i]));
        let obs = mac_phase([&x[0], &x[1], &x[2]], &mac_noise, &mut rng);

        let c_r = pair.add(&pair.add(&c[0], &c[1]), &c[2]);
        let observed = pair.dithered_observation(&obs.relay, &[&dithers[0], &dithers[1], &dithers[2]], gamma_relay);
        let c_r_hat = pair.quantize_fine(&observed);
        let truth = pair.point(&c_r);
        let residual_vec: Vec<f64> = observed.iter().zip(&truth).map(|(o, c)| o - c).collect();
        let residual = pair.mod_coarse(&residual_vec).iter().map(|v| v * v).sum::<f64>() / dim as f64;

        let mut bc_rng = trial_rng(cfg.seed, Purpose::Broadcast, t);
        let (delivered, relay_power): ([Option<LatticeCodeword>; 3], f64) = match coded_size {
            None if bc_feasible => ([0, 1, 2].map(|_| Some(c_r_hat.clone())), POWER),
            None => ([None, None, None], POWER),
            Some(size) => {
                let book: Vec<Vec<f64>> = (0..size)
                    .map(|idx| {
                        let mut r = codeword_rng(cfg.seed, Purpose::RelayCodebook, t, idx as u64);
                        gaussian_codeword(&mut r, bc_uses, POWER)
                    })
                    .collect();
                let sent = pair.message(&c_r_hat).to_u128(&pair).expect("checked codebook size") as usize;
                let y = bc_phase(&book[sent], &bc_noise, &mut bc_rng);
                let decoded = [0, 1, 2].map(|i| {
                    let idx = argmin(book.iter().map(|cw| sq_dist(&y[i], cw)));
                    let msg = MessageIndex::from_u128(idx as u128, &pair).expect("index below codebook size");
                    Some(pair.codeword(&msg))
                });
                (decoded, power_per_symbol(&book[sent]))
            }
        };

        let mut out = TrialOutcome {
            relay_error: c_r_hat != c_r,
            residual,
            source_power: [0, 1, 2].map(|i| power_per_symbol(&x[i])),
            relay_power,
            ..Default::default()
        };
        for i in 0..3 {
            let (j, k) = Topology::overheard(i);
            let side = pair.sum_decode(&obs.receivers[i], &[&dithers[j], &dithers[k]], gamma_side);
            out.receiver_errors[i] = match &delivered[i] {
                Some(cr) => pair.extract_own(cr, &side) != c[i],
                None => true,
            };
        }
        out
    });

    Ok((
        tally,
        Report {
            relay: true,
            relay_messages: false,
            residual: true,
            relay_power: cfg.bc_mode == BcMode::Coded,
            code: CodeSummary {
                codebook_size: pair.codebook_size(),
                codebook_bits: pair.codebook_bits(),
                rate: pair.codebook_bits() / (mac_uses + bc_uses) as f64,
                mac_uses,
                bc_uses,
                nesting_ratio: Some(pair.nesting_ratio()),
                bc_feasible: Some(bc_feasible),
            },
        },
    ))
}
