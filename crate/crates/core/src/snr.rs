//! Scalar domain types shared by the rate engine, the codec and the simulator.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Linear signal-to-noise ratio `P / N`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SnrPoint {
    linear: f64,
}

impl SnrPoint {
    pub const ZERO: SnrPoint = SnrPoint { linear: 0.0 };

    /// # Panics
    ///
    /// Panics if `linear` is negative or NaN.
    pub fn from_linear(linear: f64) -> SnrPoint {
        assert!(linear >= 0.0, "snr must be non-negative, got {linear}");
        SnrPoint { linear }
    }

    pub fn from_db(db: f64) -> SnrPoint {
        SnrPoint::from_linear(10f64.powf(db / 10.0))
    }

    #[inline]
    pub fn linear(self) -> f64 {
        self.linear
    }

    /// Value in decibels; `-inf` at zero.
    pub fn db(self) -> f64 {
        10.0 * self.linear.log10()
    }
}

impl fmt::Display for SnrPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:.3} dB)", self.linear, self.db())
    }
}

/// Relative durations of the multiple-access and broadcast phases.
///
/// Only the first phase is stored, the second is always `1 - delta1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseSplit {
    delta1: f64,
}

impl PhaseSplit {
    pub const EVEN: PhaseSplit = PhaseSplit { delta1: 0.5 };

    /// # Panics
    ///
    /// Panics unless `0 <= delta1 <= 1`.
    pub fn new(delta1: f64) -> PhaseSplit {
        assert!(
            (0.0..=1.0).contains(&delta1),
            "phase duration must lie in [0, 1], got {delta1}"
        );
        PhaseSplit { delta1 }
    }

    #[inline]
    pub fn delta1(self) -> f64 {
        self.delta1
    }

    #[inline]
    pub fn delta2(self) -> f64 {
        1.0 - self.delta1
    }
}

/// Common rate supported by all three source-sink pairs, in bits per complex
/// channel use.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExchangeRate(f64);

impl ExchangeRate {
    pub const ZERO: ExchangeRate = ExchangeRate(0.0);

    /// Negative values (and `-0.0`) are clamped to zero.
    pub fn from_bits(bits: f64) -> ExchangeRate {
        if bits > 0.0 {
            ExchangeRate(bits)
        } else {
            ExchangeRate(0.0)
        }
    }

    #[inline]
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ExchangeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bit/use", self.0)
    }
}
