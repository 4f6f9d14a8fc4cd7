use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Error count with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStat {
    pub errors: u64,
    pub trials: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Half the interval width.
    pub half_width: f64,
}

impl ErrorStat {
    pub fn new(errors: u64, trials: u64) -> ErrorStat {
        assert!(trials > 0 && errors <= trials);
        let (ci_low, ci_high) = wilson_interval(errors, trials, Z95);
        ErrorStat {
            errors,
            trials,
            rate: errors as f64 / trials as f64,
            ci_low,
            ci_high,
            half_width: (ci_high - ci_low) / 2.0,
        }
    }
}

pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let spread = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - spread).max(0.0), (centre + spread).min(1.0))
}
