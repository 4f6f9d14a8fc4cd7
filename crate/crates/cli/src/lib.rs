//! Sweep specification and on-disk formats for the `starnet` tool.

pub mod output;
pub mod sweep;

pub use output::{RatesRecord, RATES_CSV_HEADER_COMMENT, RATES_JSON_SCHEMA};
pub use sweep::{Spacing, SweepSpec};
