//! Records and their CSV and JSON encodings.
//!
//! Counts are always decimal strings. Every real is rounded to 15 significant
//! digits when a record is built, so the JSON encoding round-trips exactly
//! and the CSV encoding prints the same digits.

use std::fmt::Write as _;
use std::path::PathBuf;

use parking_core::Count;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::args::{Command, Format, Milli};

/// Marker written in place of an absent optional value.
pub const MISSING: &str = "NA";

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Full resolved invocation, echoed in every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document<R> {
    pub config: RunConfig,
    pub records: Vec<R>,
}

pub enum Field {
    Int(u64),
    /// Written verbatim.
    Plain(String),
    /// Written quoted.
    Text(String),
    Real(f64),
    OptReal(Option<f64>),
}

pub trait Record: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<Field>;
}

/// One exact defect probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistRecord {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub count: Count,
    pub probability: f64,
    pub approx: Option<f64>,
}

impl DistRecord {
    pub fn new(n: u32, m: u32, k: u32, count: Count, total: &Count, approx: Option<f64>) -> Self {
        let probability = sig15(count.ratio(total));
        DistRecord {
            n,
            m,
            k,
            count,
            probability,
            approx: approx.map(sig15),
        }
    }
}

impl Record for DistRecord {
    const HEADER: &'static [&'static str] = &["n", "m", "k", "count", "probability", "approx"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.n.into()),
            Field::Int(self.m.into()),
            Field::Int(self.k.into()),
            Field::Text(self.count.to_string()),
            Field::Real(self.probability),
            Field::OptReal(self.approx),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig1Record {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub exact_probability: f64,
    pub approx: Option<f64>,
}

impl Record for Fig1Record {
    const HEADER: &'static [&'static str] = &["n", "m", "k", "exact_probability", "approx"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.n.into()),
            Field::Int(self.m.into()),
            Field::Int(self.k.into()),
            Field::Real(self.exact_probability),
            Field::OptReal(self.approx),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig2Record {
    pub n: u32,
    pub lambda: Milli,
    pub m: u32,
    pub exact_full_probability: f64,
    pub limit: f64,
}

impl Record for Fig2Record {
    const HEADER: &'static [&'static str] =
        &["n", "lambda", "m", "exact_full_probability", "limit"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.n.into()),
            Field::Plain(self.lambda.to_string()),
            Field::Int(self.m.into()),
            Field::Real(self.exact_full_probability),
            Field::Real(self.limit),
        ]
    }
}

/// One bin of a Monte Carlo histogram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub n: u64,
    pub m: u64,
    pub k: u64,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub exact_probability: Option<f64>,
}

impl Record for SimRecord {
    const HEADER: &'static [&'static str] = &[
        "n",
        "m",
        "k",
        "trials",
        "hits",
        "frequency",
        "exact_probability",
    ];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.n),
            Field::Int(self.m),
            Field::Int(self.k),
            Field::Int(self.trials),
            Field::Int(self.hits),
            Field::Real(self.frequency),
            Field::OptReal(self.exact_probability),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouponRecord {
    pub n: u64,
    pub run: u64,
    pub seed: u64,
    pub cars: u64,
}

impl Record for CouponRecord {
    const HEADER: &'static [&'static str] = &["n", "run", "seed", "cars"];
    fn fields(&self) -> Vec<Field> {
        vec![
            Field::Int(self.n),
            Field::Int(self.run),
            Field::Int(self.seed),
            Field::Int(self.cars),
        ]
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// First line of every CSV output.
pub fn config_comment(config: &RunConfig) -> String {
    format!(
        "# config: {}\n",
        serde_json::to_string(config).expect("config serializes")
    )
}

pub fn to_csv<R: Record>(config: &RunConfig, records: &[R]) -> String {
    let mut out = config_comment(config);
    out.push_str(&R::HEADER.join(","));
    out.push('\n');
    for r in records {
        let cells: Vec<String> = r
            .fields()
            .into_iter()
            .map(|f| match f {
                Field::Int(v) => v.to_string(),
                Field::Plain(s) => s,
                Field::Text(s) => quote(&s),
                Field::Real(x) | Field::OptReal(Some(x)) => format!("{x:.14e}"),
                Field::OptReal(None) => MISSING.to_owned(),
            })
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

pub fn to_json<R: Record>(config: &RunConfig, records: Vec<R>) -> String {
    let doc = Document {
        config: config.clone(),
        records,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("records serialize");
    text.push('\n');
    text
}

pub fn render<R: Record>(config: &RunConfig, records: Vec<R>) -> String {
    match config.format {
        Format::Csv => to_csv(config, &records),
        Format::Json => to_json(config, records),
    }
}
