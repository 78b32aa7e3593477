//! CSV and JSON encodings of a run. Both carry the resolved config and parse
//! back to the same config and records.

use anyhow::{bail, Context, Result};
use rebits_core::table8::CostRow;
use rebits_core::OpCounters;
use rebits_kernels::ResultRecord;
use serde::{Deserialize, Serialize};

use crate::config::{OutFormat, RunConfig};

pub const COLUMNS: [&str; 18] = [
    "kernel",
    "scheme",
    "format",
    "n",
    "seed",
    "policy",
    "order",
    "partitions",
    "value_hex",
    "value_dec",
    "abs_err",
    "rel_err",
    "fpadd",
    "fpmult",
    "fpdiv",
    "fpcomp",
    "move_fperr",
    "error",
];

const CONFIG_PREFIX: &str = "# config: ";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub config: RunConfig,
    pub records: Vec<ResultRecord>,
}

impl RunOutput {
    /// Sorts records into canonical order.
    pub fn new(config: RunConfig, mut records: Vec<ResultRecord>) -> Self {
        records.sort_by(|a, b| a.key().cmp(&b.key()));
        Self { config, records }
    }

    pub fn encode(&self, out: OutFormat) -> Result<String> {
        match out {
            OutFormat::Csv => self.to_csv(),
            OutFormat::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut text = format!("{CONFIG_PREFIX}{}\n", serde_json::to_string(&self.config)?);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(COLUMNS)?;
        for r in &self.records {
            w.write_record(csv_row(r))?;
        }
        text.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(text)
    }

    /// Parses either encoding.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let (first, rest) = text.split_once('\n').context("empty output")?;
        let config = first.strip_prefix(CONFIG_PREFIX).context("missing config line")?;
        let config: RunConfig = serde_json::from_str(config)?;
        let mut rd = csv::Reader::from_reader(rest.as_bytes());
        if rd.headers()?.iter().ne(COLUMNS) {
            bail!("unexpected CSV header");
        }
        let records = rd.records().map(|row| parse_row(&row?)).collect::<Result<_>>()?;
        Ok(Self { config, records })
    }
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_row(r: &ResultRecord) -> Vec<String> {
    let c = r.counts;
    vec![
        r.kernel.clone(),
        r.scheme.clone(),
        r.format.clone(),
        r.n.to_string(),
        r.seed.to_string(),
        r.policy.clone(),
        r.order.clone(),
        r.partitions.to_string(),
        r.value_hex.clone(),
        r.value_dec.clone(),
        opt_f64(r.abs_err),
        opt_f64(r.rel_err),
        c.fpadd.to_string(),
        c.fpmult.to_string(),
        c.fpdiv.to_string(),
        c.fpcomp.to_string(),
        c.move_fperr.to_string(),
        r.error.clone().unwrap_or_default(),
    ]
}

fn parse_row(row: &csv::StringRecord) -> Result<ResultRecord> {
    if row.len() != COLUMNS.len() {
        bail!("row has {} fields, expected {}", row.len(), COLUMNS.len());
    }
    let s = |i: usize| row[i].to_string();
    let u = |i: usize| -> Result<u64> { row[i].parse().with_context(|| format!("column {}", COLUMNS[i])) };
    let f = |i: usize| -> Result<Option<f64>> {
        if row[i].is_empty() {
            Ok(None)
        } else {
            Ok(Some(row[i].parse().with_context(|| format!("column {}", COLUMNS[i]))?))
        }
    };
    Ok(ResultRecord {
        kernel: s(0),
        scheme: s(1),
        format: s(2),
        n: u(3)?,
        seed: u(4)?,
        policy: s(5),
        order: s(6),
        partitions: u(7)?,
        value_hex: s(8),
        value_dec: s(9),
        abs_err: f(10)?,
        rel_err: f(11)?,
        counts: OpCounters { fpadd: u(12)?, fpmult: u(13)?, fpdiv: u(14)?, fpcomp: u(15)?, move_fperr: u(16)? },
        error: if row[17].is_empty() { None } else { Some(s(17)) },
    })
}

const TABLE8_COLUMNS: [&str; 9] = [
    "scheme",
    "operation",
    "format",
    "published_native",
    "published_rebits",
    "measured_native",
    "measured_rebits",
    "status",
    "note",
];

pub fn table8_text(rows: &[CostRow], out: OutFormat) -> Result<String> {
    match out {
        OutFormat::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(TABLE8_COLUMNS)?;
            for r in rows {
                w.write_record([
                    r.scheme.clone(),
                    r.operation.clone(),
                    r.format.clone(),
                    r.published_native.to_string(),
                    r.published_rebits.to_string(),
                    r.measured_native.to_string(),
                    r.measured_rebits.to_string(),
                    r.status.to_string(),
                    r.note.clone(),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}
