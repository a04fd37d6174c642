//! Run manifests and the two output encodings.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;
use twistcert::io::format_f64;

/// What produced an output file. Identical manifests give identical files,
/// so the timestamp is only recorded when `SOURCE_DATE_EPOCH` pins it.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: &impl Serialize, seed: Option<u64>) -> anyhow::Result<Self> {
        Ok(Self {
            command: command.into(),
            parameters: serde_json::to_value(parameters)?,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        })
    }
}

/// Decimal form for CSV cells: 17 significant digits, `inf` for `∞`.
pub fn cell(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format_f64(x)
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
    /// Extra rows appended after a comment line.
    pub trailer: Option<(String, Vec<Vec<String>>)>,
}

/// CSV with the manifest as leading `#` lines.
pub fn render_csv(manifest: &RunManifest, table: &Table) -> anyhow::Result<String> {
    let mut out = String::new();
    for line in serde_json::to_string_pretty(manifest)?.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&table.header.join(","));
    out.push('\n');
    fn push(out: &mut String, rows: &[Vec<String>]) {
        for r in rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
    }
    push(&mut out, &table.rows);
    if let Some((comment, rows)) = &table.trailer {
        out.push_str("# ");
        out.push_str(comment);
        out.push('\n');
        push(&mut out, rows);
    }
    Ok(out)
}

/// The same table as JSON records under `rows`.
pub fn render_table_json(manifest: &RunManifest, table: &Table) -> anyhow::Result<String> {
    let record = |r: &Vec<String>| -> Value {
        table
            .header
            .iter()
            .zip(r)
            .map(|(k, v)| {
                let value = v.parse::<f64>().ok().filter(|x| x.is_finite()).map_or(Value::String(v.clone()), Value::from);
                (k.to_string(), value)
            })
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let mut doc = serde_json::json!({
        "manifest": manifest,
        "rows": table.rows.iter().map(record).collect::<Vec<_>>(),
    });
    if let Some((_, rows)) = &table.trailer {
        doc["threshold_rows"] = rows.iter().map(record).collect::<Vec<_>>().into();
    }
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// A JSON report with the manifest as its first field.
pub fn render_report(manifest: &RunManifest, body: Value) -> anyhow::Result<String> {
    let mut doc = serde_json::Map::new();
    doc.insert("manifest".into(), serde_json::to_value(manifest)?);
    match body {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    Ok(serde_json::to_string_pretty(&Value::Object(doc))? + "\n")
}

pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}
