//! Run configuration echo and the JSON/CSV writers.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved settings of one run, echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: Value,
    pub seed: u64,
    pub tol: f64,
    pub units: &'static str,
    pub threads: usize,
    pub format: Format,
    pub output: Option<String>,
}

impl RunConfig {
    pub fn scale(&self) -> f64 {
        if self.units == "bits" {
            1.0 / LN_2
        } else {
            1.0
        }
    }
}

pub fn json_document(config: &RunConfig, result: Value) -> String {
    let doc = json!({
        "artifact": "orbent",
        "version": VERSION,
        "config": config,
        "units": config.units,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// `%.12g`: twelve significant digits, fixed notation for moderate
/// exponents.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific notation");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(usize),
    Float(f64),
}

/// A result table with unit-bearing column names.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# orbent {VERSION}");
        let _ = writeln!(
            out,
            "# config: {}",
            serde_json::to_string(config).expect("plain data serializes")
        );
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => sig12(*x),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, config: &RunConfig) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| {
                        let v = match cell {
                            Cell::Int(i) => json!(i),
                            Cell::Float(x) => json!(x),
                        };
                        (name.clone(), v)
                    })
                    .collect::<serde_json::Map<_, _>>();
                Value::Object(map)
            })
            .collect();
        json_document(config, json!({ "columns": self.columns, "rows": rows }))
    }
}
