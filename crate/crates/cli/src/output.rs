//! Rate-curve output records.
//!
//! CSV files start with the comment line [`RATES_CSV_HEADER_COMMENT`]
//! followed by a header row with the columns of [`RatesRecord`] in field
//! order. JSON files are a single object `{"schema": RATES_JSON_SCHEMA,
//! "records": [...]}`. Floats use the shortest representation that parses
//! back to the same value.

use serde::{Deserialize, Serialize};
use starnet_core::RateCurvePoint;
use std::io::{self, BufRead, Read, Write};

pub const RATES_CSV_HEADER_COMMENT: &str = "# starnet rates v1";
pub const RATES_JSON_SCHEMA: &str = "starnet/rates/v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatesRecord {
    pub snr_db: f64,
    pub snr_linear: f64,
    pub ub: f64,
    pub ub_delta1: f64,
    pub df: f64,
    pub df_delta1: f64,
    pub af: f64,
    pub lattice: f64,
    pub lattice_delta1: f64,
    pub best: f64,
    pub gap_lattice: f64,
    pub gap_best: f64,
}

impl From<&RateCurvePoint> for RatesRecord {
    fn from(p: &RateCurvePoint) -> Self {
        RatesRecord {
            snr_db: p.snr.db(),
            snr_linear: p.snr.linear(),
            ub: p.ub.bits(),
            ub_delta1: p.ub_split.delta1(),
            df: p.df.bits(),
            df_delta1: p.df_split.delta1(),
            af: p.af.bits(),
            lattice: p.lattice.bits(),
            lattice_delta1: p.lattice_split.delta1(),
            best: p.best_of_three.bits(),
            gap_lattice: p.gap_lattice,
            gap_best: p.gap_best,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RatesDocument {
    schema: String,
    records: Vec<RatesRecord>,
}

pub fn write_csv<W: Write>(mut out: W, records: &[RatesRecord]) -> io::Result<()> {
    writeln!(out, "{RATES_CSV_HEADER_COMMENT}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn write_json<W: Write>(mut out: W, records: &[RatesRecord]) -> io::Result<()> {
    let doc = RatesDocument {
        schema: RATES_JSON_SCHEMA.to_string(),
        records: records.to_vec(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<RatesRecord>, String> {
    let mut input = io::BufReader::new(input);
    let mut first = String::new();
    input.read_line(&mut first).map_err(|e| e.to_string())?;
    if first.trim_end() != RATES_CSV_HEADER_COMMENT {
        return Err(format!("unsupported CSV version line: {:?}", first.trim_end()));
    }
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<RatesRecord>, String> {
    let doc: RatesDocument = serde_json::from_reader(input).map_err(|e| e.to_string())?;
    if doc.schema != RATES_JSON_SCHEMA {
        return Err(format!("unsupported schema {:?}", doc.schema));
    }
    Ok(doc.records)
}
