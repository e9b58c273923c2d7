//! Atomic file output with embedded run metadata.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "robust-overparam";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `{tool, version, command, seed, config}`; contains nothing run-dependent
/// beyond its inputs, so reruns produce identical bytes.
pub fn meta<C: Serialize>(command: &str, seed: u64, config: &C) -> Result<Value> {
    Ok(json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "seed": seed,
        "config": serde_json::to_value(config)?,
    }))
}

/// Writes to a sibling temp file, syncs, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Usage(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// CSV with a leading `# {meta}` comment line, then a header and one row per record.
pub fn csv_bytes<T: Serialize>(meta: &Value, rows: &[T]) -> Result<Vec<u8>> {
    let mut out = format!("# {}\n", serde_json::to_string(meta)?).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(out)
}

/// Pretty JSON of `body` with a `meta` member added.
pub fn json_bytes<T: Serialize>(meta: &Value, body: &T) -> Result<Vec<u8>> {
    let mut value = serde_json::to_value(body)?;
    match value.as_object_mut() {
        Some(obj) => {
            obj.insert("meta".into(), meta.clone());
        }
        None => value = json!({ "result": value, "meta": meta }),
    }
    let mut out = serde_json::to_vec_pretty(&value)?;
    out.push(b'\n');
    Ok(out)
}
