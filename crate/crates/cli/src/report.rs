use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// What produced a report: the command path, its fully resolved
/// configuration and the root seed of any sampling.
pub struct Meta {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
}

impl Meta {
    pub fn new(command: &'static str, config: Value, seed: Option<u64>) -> Meta {
        Meta { command, config, seed }
    }

    /// SHA-256 of the canonical JSON of command and configuration.
    pub fn config_hash(&self) -> String {
        let canonical = json!({ "command": self.command, "config": self.config, "seed": self.seed });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// A JSON document with the hash, seed and configuration beside the result.
pub fn write_json(out: Option<&Path>, meta: &Meta, result: Value) -> anyhow::Result<()> {
    let doc = json!({
        "command": meta.command,
        "config_hash": meta.config_hash(),
        "seed": meta.seed,
        "config": meta.config,
        "result": result,
    });
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// CSV preceded by one `#` header line; the timestamp lives only there.
pub fn write_csv(out: Option<&Path>, meta: &Meta, table: &Table) -> anyhow::Result<()> {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let seed = meta.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let mut w = sink(out)?;
    writeln!(w, "# arbor {} config_hash={} seed={seed} generated_unix={now}", meta.command, meta.config_hash())?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.columns)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

/// Decimal rendering with twelve digits after the point.
pub fn decimal(r: &BigRational) -> String {
    format!("{:.12}", r.to_f64().unwrap_or(f64::NAN))
}
