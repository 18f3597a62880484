use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// One JSON object per command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub result: Value,
    pub stderr: Option<f64>,
    pub seed: u64,
    pub reps: Option<u64>,
    pub runtime_ms: u64,
    pub artifact_version: String,
    /// Identity or formula the command exercises.
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
}

impl RunRecord {
    pub fn new(command: &str, anchor: &str, seed: u64) -> Self {
        RunRecord {
            command: command.to_string(),
            params: BTreeMap::new(),
            result: Value::Null,
            stderr: None,
            seed,
            reps: None,
            runtime_ms: 0,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            anchor: anchor.to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string(self)?)
    }
}

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_path(&self, path: &Path) -> Result<(), CliError> {
        self.write_to(std::fs::File::create(path)?)
    }
}
