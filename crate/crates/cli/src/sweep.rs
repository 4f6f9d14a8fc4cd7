use serde::{Deserialize, Serialize};
use starnet_core::SnrPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    /// Evenly spaced in dB.
    LinearDb,
    /// Evenly spaced in linear SNR between the two endpoints.
    LogLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.points == 0 {
            return Err("a sweep needs at least one point".into());
        }
        if !(self.snr_db_start.is_finite() && self.snr_db_stop.is_finite()) {
            return Err("sweep endpoints must be finite".into());
        }
        if self.snr_db_start > self.snr_db_stop {
            return Err(format!(
                "sweep start {} dB is above stop {} dB",
                self.snr_db_start, self.snr_db_stop
            ));
        }
        Ok(())
    }

    /// Grid points in ascending order; the endpoints are exact.
    pub fn grid(&self) -> Result<Vec<SnrPoint>, String> {
        self.validate()?;
        let n = self.points;
        if n == 1 {
            return Ok(vec![SnrPoint::from_db(self.snr_db_start)]);
        }
        let t = |i: usize| i as f64 / (n - 1) as f64;
        Ok(match self.spacing {
            Spacing::LinearDb => {
                let (a, b) = (self.snr_db_start, self.snr_db_stop);
                (0..n).map(|i| SnrPoint::from_db(a + (b - a) * t(i))).collect()
            }
            Spacing::LogLinear => {
                let a = SnrPoint::from_db(self.snr_db_start).linear();
                let b = SnrPoint::from_db(self.snr_db_stop).linear();
                (0..n).map(|i| SnrPoint::from_linear(a + (b - a) * t(i))).collect()
            }
        })
    }
}
