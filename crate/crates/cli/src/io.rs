//! Reading inputs from files or stdin and writing outputs to files or stdout.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use satsched_core::windowing::PREPROCESS_SCHEMA;
use satsched_core::{Assignment, SchedulingInstance};
use serde_json::Value;

use crate::manifest::{sha256_hex, InputRecord};
use crate::UsageError;

/// `None` or `-` means stdin.
pub fn is_stdin(path: Option<&Path>) -> bool {
    path.map_or(true, |p| p.as_os_str() == "-")
}

pub struct Input {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(path: Option<&Path>) -> Result<Self> {
        if is_stdin(path) {
            let mut bytes = Vec::new();
            io::stdin().read_to_end(&mut bytes).context("reading stdin")?;
            Ok(Self { path: None, bytes })
        } else {
            let path = path.expect("checked above");
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Self {
                path: Some(path.to_path_buf()),
                bytes,
            })
        }
    }

    pub fn label(&self) -> String {
        match &self.path {
            Some(p) => p.display().to_string(),
            None => "<stdin>".into(),
        }
    }

    /// File stem, or `stdin`.
    pub fn stem(&self) -> String {
        self.path
            .as_deref()
            .and_then(Path::file_stem)
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "stdin".into())
    }

    pub fn record(&self) -> InputRecord {
        InputRecord {
            path: self.label(),
            sha256: sha256_hex(&self.bytes),
        }
    }
}

/// Fail with a usage error when more than one input would come from stdin.
pub fn check_single_stdin(paths: &[Option<&Path>]) -> Result<()> {
    if paths.iter().filter(|p| is_stdin(**p)).count() > 1 {
        bail!(UsageError("at most one input can be read from stdin".into()));
    }
    Ok(())
}

/// Accept an instance document, or a preprocessing document carrying its
/// source instance.
pub fn parse_instance(input: &Input) -> Result<SchedulingInstance> {
    let value: Value =
        serde_json::from_slice(&input.bytes).with_context(|| format!("{}: not valid JSON", input.label()))?;
    let value = if value.get("schema").and_then(Value::as_str) == Some(PREPROCESS_SCHEMA) {
        match value.get("instance") {
            Some(inner) => inner.clone(),
            None => bail!("{}: preprocessing document has no `instance`", input.label()),
        }
    } else {
        value
    };
    SchedulingInstance::from_value(value).with_context(|| format!("{}: invalid instance", input.label()))
}

pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    if is_stdin(path) {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
    } else {
        let path = path.expect("checked above");
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn json_bytes(value: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serializes");
    s.push('\n');
    s.into_bytes()
}

/// CSV text with a leading `# manifest_digest=` comment line.
pub fn csv_bytes<R: serde::Serialize>(digest: &str, header: &[&str], rows: &[R]) -> Result<Vec<u8>> {
    let mut out = format!("# manifest_digest={digest}\n").into_bytes();
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    drop(w);
    Ok(out)
}

pub const SCHEDULE_HEADER: [&str; 6] = ["mission", "resource", "window_begin", "window_end", "start", "duration"];

pub fn read_schedule_csv(input: &Input) -> Result<Vec<Assignment>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input.bytes.as_slice());
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != SCHEDULE_HEADER {
        bail!("{}: expected columns {}", input.label(), SCHEDULE_HEADER.join(","));
    }
    let mut out = Vec::new();
    for (k, row) in r.deserialize().enumerate() {
        let a: Assignment = row.with_context(|| format!("{}: schedule row {}", input.label(), k + 1))?;
        out.push(a);
    }
    Ok(out)
}
