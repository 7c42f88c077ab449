use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use crate::config::Settings;

/// `key=value` provenance lines written at the top of every output.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Meta(BTreeMap<String, String>);

impl Meta {
    pub fn new(command: &str, settings: &Settings) -> Self {
        let mut meta = Meta::default();
        meta.set("tool", format!("warnsmell {}", env!("CARGO_PKG_VERSION")));
        meta.set("command", command);
        if !settings.deterministic {
            let secs = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            meta.set("generated_at_unix", secs.to_string());
        }
        meta
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with(&self, key: &str, value: impl ToString) -> Self {
        let mut m = self.clone();
        m.set(key, value);
        m
    }
}

pub fn write_table(path: &Path, meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    for (k, v) in &meta.0 {
        writeln!(buf, "# {k}={}", v.replace('\n', " "))?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    metadata: &'a Meta,
    data: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, meta: &Meta, data: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(&Envelope { metadata: meta, data })?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    #[derive(serde::Deserialize)]
    struct Data<T> {
        data: T,
    }
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: Data<T> = serde_json::from_str(&text).with_context(|| format!("malformed {}", path.display()))?;
    Ok(parsed.data)
}

/// Fixed six-decimal rendering for tables.
pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt6).unwrap_or_default()
}
