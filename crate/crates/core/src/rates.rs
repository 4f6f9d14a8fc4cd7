//! Closed-form Gaussian exchange-rate bounds for the two-phase star network.
//!
//! Every function here is a pure function of the SNR (and, where relevant,
//! the phase split). Logarithms are base 2, so rates are in bits per complex
//! channel use. Notation used in the comments:
//!
//! ```text
//! L1 = log2(1 + snr)      single-link capacity
//! L3 = log2(1 + 3 snr)    three-user sum capacity at the relay
//! Ll = log2(1/3 + snr)    nested-lattice computation rate (three summands)
//! ```

use crate::snr::{ExchangeRate, PhaseSplit, SnrPoint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RateError {
    #[error("snr grid is empty")]
    EmptyGrid,
    #[error("snr grid is not sorted ascending at index {0}")]
    UnsortedGrid(usize),
}

#[inline]
fn single_link(snr: SnrPoint) -> f64 {
    (1.0 + snr.linear()).log2()
}

#[inline]
fn relay_sum(snr: SnrPoint) -> f64 {
    (1.0 + 3.0 * snr.linear()).log2()
}

#[inline]
fn lattice_log(snr: SnrPoint) -> f64 {
    (1.0 / 3.0 + snr.linear()).log2()
}

/// Cut-set bound on the exchange rate for a given split:
/// `min(Δ1 L1, Δ2 L3)`.
pub fn ub_exchange(snr: SnrPoint, split: PhaseSplit) -> ExchangeRate {
    ExchangeRate::from_bits(
        (split.delta1() * single_link(snr)).min(split.delta2() * relay_sum(snr)),
    )
}

/// Caps on `2R` and `3R` from the two- and three-pair cut-sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumCaps {
    pub two_r: f64,
    pub three_r: f64,
}

pub fn ub_sum_constraints(snr: SnrPoint, split: PhaseSplit) -> SumCaps {
    let s = snr.linear();
    let (d1, d2) = (split.delta1(), split.delta2());
    let l1 = single_link(snr);
    let l3 = relay_sum(snr);
    let two_r = (d1 * (1.0 + 4.0 * s + 3.0 * s * s).log2()).min(d1 * 2.0 * l1 + d2 * l3);
    let three_r = (d1 * (2.0 * l1 + (1.0 + 7.0 * s).log2()))
        .min(d1 * (2.0 * l1 + (1.0 + 4.0 * s).log2()) + d2 * l3);
    SumCaps { two_r, three_r }
}

/// Cut-set bound maximised over the split: `L1 L3 / (L1 + L3)` at
/// `Δ1 = L3 / (L1 + L3)`.
///
/// At zero SNR the rate is zero and the split is reported as even.
pub fn ub_exchange_optimal(snr: SnrPoint) -> (ExchangeRate, PhaseSplit) {
    if snr.linear() == 0.0 {
        return (ExchangeRate::ZERO, PhaseSplit::EVEN);
    }
    let l1 = single_link(snr);
    let l3 = relay_sum(snr);
    (
        ExchangeRate::from_bits(l1 * l3 / (l1 + l3)),
        PhaseSplit::new(l3 / (l1 + l3)),
    )
}

/// The three decode-and-forward constraints, each already divided through to
/// a bound on `R`: `[min(Δ1,Δ2) L1, Δ1 log2(1+2snr) / 2, Δ1 L3 / 3]`.
pub fn df_constraints(snr: SnrPoint, split: PhaseSplit) -> [f64; 3] {
    let (d1, d2) = (split.delta1(), split.delta2());
    [
        d1.min(d2) * single_link(snr),
        d1 * (1.0 + 2.0 * snr.linear()).log2() / 2.0,
        d1 * relay_sum(snr) / 3.0,
    ]
}

pub fn df_exchange(snr: SnrPoint, split: PhaseSplit) -> ExchangeRate {
    let c = df_constraints(snr, split);
    ExchangeRate::from_bits(c[0].min(c[1]).min(c[2]))
}

/// `L1 L3 / (3 L1 + L3)` at `Δ1 = 3 L1 / (3 L1 + L3)`; zero SNR reports
/// `Δ1 = 3/4`, the limit of that split.
///
/// This drops the pairwise constraint, see [`validate_df_optimum`].
pub fn df_exchange_optimal(snr: SnrPoint) -> (ExchangeRate, PhaseSplit) {
    if snr.linear() == 0.0 {
        return (ExchangeRate::ZERO, PhaseSplit::new(0.75));
    }
    let l1 = single_link(snr);
    let l3 = relay_sum(snr);
    (
        ExchangeRate::from_bits(l1 * l3 / (3.0 * l1 + l3)),
        PhaseSplit::new(3.0 * l1 / (3.0 * l1 + l3)),
    )
}

/// Outcome of checking the closed-form DF optimum against a direct search
/// over all three constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfValidation {
    pub closed_form: f64,
    pub searched: f64,
    pub searched_delta1: f64,
    /// `Δ1 log2(1+2snr)/2 - R` at the closed-form split.
    pub two_r_slack: f64,
    pub two_r_binds: bool,
}

/// Grid-search `df_exchange` over `Δ1 ∈ [0, 1]` and report whether the
/// pairwise (2R) constraint is active at the closed-form optimum.
///
/// # Panics
///
/// Panics if `step` is not in `(0, 1]`.
pub fn validate_df_optimum(snr: SnrPoint, step: f64) -> DfValidation {
    assert!(step > 0.0 && step <= 1.0);
    let (rate, split) = df_exchange_optimal(snr);
    let steps = (1.0 / step).ceil() as usize;
    let (searched_delta1, searched) = (0..=steps)
        .map(|i| {
            let d = (i as f64 * step).min(1.0);
            (d, df_exchange(snr, PhaseSplit::new(d)).bits())
        })
        .fold((0.0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
    let two_r_slack = df_constraints(snr, split)[1] - rate.bits();
    let tol = 1e-12 * rate.bits().max(1.0);
    DfValidation {
        closed_form: rate.bits(),
        searched,
        searched_delta1,
        two_r_slack,
        two_r_binds: rate.bits() > 0.0 && two_r_slack <= tol,
    }
}

/// The three amplify-and-forward terms (single, pair, triple) at the fixed
/// even split, each normalised to a bound on `R`.
pub fn af_terms(snr: SnrPoint) -> [f64; 3] {
    let s = snr.linear();
    let g = s / (1.0 + 4.0 * s);
    [
        0.5 * (1.0 + g * s).log2(),
        0.25 * (1.0 + (1.0 + 6.0 * s) / (1.0 + 4.0 * s) * s + g * s * s).log2(),
        (1.0 + (2.0 + 11.0 * s) / (1.0 + 4.0 * s) * s + 2.0 * g * s * s).log2() / 6.0,
    ]
}

pub fn af_exchange(snr: SnrPoint) -> ExchangeRate {
    let t = af_terms(snr);
    ExchangeRate::from_bits(t[0].min(t[1]).min(t[2]))
}

/// Relay amplification gain squared, `P / (3P + N)`, i.e. `snr / (1 + 3 snr)`
/// with unit noise.
pub fn af_relay_gain_sq(snr: SnrPoint) -> f64 {
    let s = snr.linear();
    s / (1.0 + 3.0 * s)
}

/// Whether the broadcast phase can carry the lattice index:
/// `Δ1 Ll < Δ2 L1`.
pub fn lattice_feasible(snr: SnrPoint, split: PhaseSplit) -> bool {
    split.delta1() * lattice_log(snr) < split.delta2() * single_link(snr)
}

/// Lattice rate for a split: the smaller of the relay computation rate
/// `Δ1 Ll` and the broadcast rate `Δ2 L1`, clamped at zero.
pub fn lattice_exchange(snr: SnrPoint, split: PhaseSplit) -> ExchangeRate {
    ExchangeRate::from_bits(
        (split.delta1() * lattice_log(snr)).min(split.delta2() * single_link(snr)),
    )
}

/// `L1 Ll / (L1 + Ll)` at `Δ1 = L1 / (L1 + Ll)`; zero for `snr <= 2/3`
/// (reported with an even split).
pub fn lattice_exchange_optimal(snr: SnrPoint) -> (ExchangeRate, PhaseSplit) {
    let ll = lattice_log(snr);
    if ll <= 0.0 {
        return (ExchangeRate::ZERO, PhaseSplit::EVEN);
    }
    let l1 = single_link(snr);
    (
        ExchangeRate::from_bits(l1 * ll / (l1 + ll)),
        PhaseSplit::new(l1 / (l1 + ll)),
    )
}

/// Worst-case lattice gap `log2(3) log2(5/3) / log2(5)`, the cut-set bound
/// at `snr = 2/3` where the lattice rate vanishes.
pub fn lattice_worst_case_gap() -> f64 {
    3f64.log2() * (5.0f64 / 3.0).log2() / 5f64.log2()
}

/// High-SNR limit of the lattice gap, `log2(3) / 4`.
pub fn lattice_asymptotic_gap() -> f64 {
    3f64.log2() / 4.0
}

/// All strategy rates at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCurvePoint {
    pub snr: SnrPoint,
    pub ub: ExchangeRate,
    pub ub_split: PhaseSplit,
    pub df: ExchangeRate,
    pub df_split: PhaseSplit,
    pub af: ExchangeRate,
    pub lattice: ExchangeRate,
    pub lattice_split: PhaseSplit,
    pub best_of_three: ExchangeRate,
    pub gap_lattice: f64,
    pub gap_best: f64,
}

pub fn curve_point(snr: SnrPoint) -> RateCurvePoint {
    let (ub, ub_split) = ub_exchange_optimal(snr);
    let (df, df_split) = df_exchange_optimal(snr);
    let af = af_exchange(snr);
    let (lattice, lattice_split) = lattice_exchange_optimal(snr);
    let best = df.bits().max(af.bits()).max(lattice.bits());
    RateCurvePoint {
        snr,
        ub,
        ub_split,
        df,
        df_split,
        af,
        lattice,
        lattice_split,
        best_of_three: ExchangeRate::from_bits(best),
        gap_lattice: ub.bits() - lattice.bits(),
        gap_best: ub.bits() - best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub max_gap_lattice: f64,
    pub max_gap_lattice_snr: SnrPoint,
    pub max_gap_best: f64,
    pub max_gap_best_snr: SnrPoint,
    /// Lattice gap at the largest grid point.
    pub top_gap_lattice: f64,
    pub top_snr: SnrPoint,
    pub asymptotic_gap: f64,
}

/// Scan a grid for the largest lattice and best-of-three gaps.
///
/// Ties keep the lowest SNR.
pub fn gap_report(grid: &[SnrPoint]) -> Result<GapSummary, RateError> {
    let first = *grid.first().ok_or(RateError::EmptyGrid)?;
    if let Some(i) = grid.windows(2).position(|w| w[1] < w[0]) {
        return Err(RateError::UnsortedGrid(i + 1));
    }
    let p0 = curve_point(first);
    let mut summary = GapSummary {
        max_gap_lattice: p0.gap_lattice,
        max_gap_lattice_snr: first,
        max_gap_best: p0.gap_best,
        max_gap_best_snr: first,
        top_gap_lattice: p0.gap_lattice,
        top_snr: first,
        asymptotic_gap: lattice_asymptotic_gap(),
    };
    for &snr in &grid[1..] {
        let p = curve_point(snr);
        if p.gap_lattice > summary.max_gap_lattice {
            summary.max_gap_lattice = p.gap_lattice;
            summary.max_gap_lattice_snr = snr;
        }
        if p.gap_best > summary.max_gap_best {
            summary.max_gap_best = p.gap_best;
            summary.max_gap_best_snr = snr;
        }
        summary.top_gap_lattice = p.gap_lattice;
        summary.top_snr = snr;
    }
    Ok(summary)
}

/// `points` SNR values spaced evenly in log scale between `lo` and `hi`
/// (both linear, both included).
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<SnrPoint> {
    assert!(lo > 0.0 && hi >= lo && points >= 1);
    if points == 1 {
        return vec![SnrPoint::from_linear(lo)];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            let v = match i {
                0 => lo,
                _ if i == points - 1 => hi,
                _ => (a + (b - a) * (i as f64 / (points - 1) as f64)).exp(),
            };
            SnrPoint::from_linear(v)
        })
        .collect()
}
