use std::io::Write;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::config::RunConfig;

/// Current version of every JSON artifact.
pub const SCHEMA: u64 = 1;

/// A finished artifact and whether every check in it passed.
pub struct Report {
    pub body: String,
    pub ok: bool,
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `{"schema": 1, "command": ..., ...fields}` pretty-printed with a trailing newline.
pub fn json_document(command: &str, fields: Map<String, Value>) -> Result<String> {
    let mut doc = Map::new();
    doc.insert("schema".into(), Value::from(SCHEMA));
    doc.insert("command".into(), Value::from(command));
    doc.extend(fields);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

pub fn parameters(cfg: &RunConfig) -> Value {
    serde_json::json!({
        "a": cfg.interval.a(),
        "b": cfg.interval.b(),
        "lambda": cfg.nu.lambda,
        "mu": cfg.nu.mu,
        "tol": cfg.tol,
    })
}

pub fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn float(v: f64) -> String {
    format!("{v:e}")
}
