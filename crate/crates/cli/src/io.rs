//! Input hashing, tolerant file readers and the shared output envelope.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use mevsym::{OrderingSet, Payoff, Permutation};

use crate::Common;

#[derive(Debug, Default, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Every file read during a run, with its content hash.
#[derive(Debug, Default)]
pub struct Inputs {
    pub records: Vec<InputRecord>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.records.push(InputRecord { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }
}

/// Accepts a bare object or one wrapped under `key` in a tool output.
fn unwrap_field(text: &str, key: &str, path: &Path) -> Result<Value> {
    let mut v: Value = serde_json::from_str(text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    Ok(match v.get_mut(key) {
        Some(inner) => inner.take(),
        None => v,
    })
}

pub fn read_payoff(inputs: &mut Inputs, path: &Path) -> Result<Payoff> {
    let text = inputs.read(path)?;
    serde_json::from_value(unwrap_field(&text, "payoff", path)?)
        .with_context(|| format!("{} does not hold a payoff", path.display()))
}

pub fn read_set(inputs: &mut Inputs, path: &Path) -> Result<OrderingSet> {
    let text = inputs.read(path)?;
    serde_json::from_value(unwrap_field(&text, "set", path)?)
        .with_context(|| format!("{} does not hold an ordering set", path.display()))
}

pub fn one_line(p: &Permutation) -> String {
    p.one_line().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Default)]
pub struct Output {
    pub inputs: Inputs,
    pub body: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn write(self, common: &Common, command: &impl Serialize) -> Result<()> {
        let mut doc = Map::new();
        doc.insert(
            "meta".into(),
            json!({
                "tool": "mevsym",
                "version": env!("CARGO_PKG_VERSION"),
                "config": { "common": common, "command": command },
                "seed": common.seed,
                "tol": common.tol,
                "max_n": common.max_n,
                "inputs": self.inputs.records,
            }),
        );
        if let Value::Object(body) = self.body {
            doc.extend(body);
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
        text.push('\n');
        match &common.out {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
            None => print!("{text}"),
        }
        if let Some(path) = &common.csv {
            let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
            w.write_record(&self.header)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}
