use std::fs;
use std::path::Path;

use anyhow::Context;
use arbor::bratteli::{self, BratteliDiagram};
use arbor::selfsim::{builtin, RecursionTable, TableJson};
use serde::de::DeserializeOwned;

/// A builtin group name, or a path to a recursion table JSON file.
pub fn load_table(subject: &str) -> anyhow::Result<RecursionTable> {
    let path = Path::new(subject);
    if path.is_file() {
        let json: TableJson = read_json(path)?;
        return Ok(RecursionTable::from_json(&json)?);
    }
    Ok(builtin::by_name(subject)?)
}

/// A builtin diagram name truncated at `horizon`, or a diagram JSON file.
pub fn load_diagram(subject: &str, horizon: usize) -> anyhow::Result<BratteliDiagram> {
    let path = Path::new(subject);
    if path.is_file() {
        return read_json(path);
    }
    Ok(bratteli::by_name(subject, horizon)?)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

/// Inline JSON, or `@path` to read it from a file.
pub fn json_arg<T: DeserializeOwned>(raw: &str) -> anyhow::Result<T> {
    match raw.strip_prefix('@') {
        Some(p) => read_json(Path::new(p)),
        None => serde_json::from_str(raw).with_context(|| format!("invalid JSON argument {raw:?}")),
    }
}
