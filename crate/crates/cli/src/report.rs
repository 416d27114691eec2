//! The JSON run report written to stdout.

use std::fs;
use std::io::Read;

use borderlab::error::{Error, Result};
use borderlab::limits;
use borderlab::rational::{to_decimal, Rational};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const DECIMAL_DIGITS: usize = 30;

/// Result fields with exact rational strings and, for each rational leaf,
/// a decimal rendering under the same key.
#[derive(Default)]
pub struct Results {
    exact: Map<String, Value>,
    decimals: Map<String, Value>,
    /// Set when a self-check that must always hold came out false.
    pub identity_failed: bool,
}

impl Results {
    pub fn rational(&mut self, key: &str, v: &Rational) -> &mut Self {
        self.exact.insert(key.into(), Value::String(v.to_string()));
        self.decimals
            .insert(key.into(), Value::String(to_decimal(v, DECIMAL_DIGITS)));
        self
    }

    pub fn rationals(&mut self, key: &str, vs: &[Rational]) -> &mut Self {
        self.exact.insert(key.into(), exact_list(vs));
        self.decimals.insert(key.into(), decimal_list(vs));
        self
    }

    pub fn matrix(&mut self, key: &str, rows: &[Vec<Rational>]) -> &mut Self {
        self.exact
            .insert(key.into(), rows.iter().map(|r| exact_list(r)).collect());
        self.decimals
            .insert(key.into(), rows.iter().map(|r| decimal_list(r)).collect());
        self
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.exact.insert(key.into(), v.into());
        self
    }

    /// Records a boolean self-check; a false value makes the run exit 1.
    pub fn identity(&mut self, key: &str, holds: bool) -> &mut Self {
        self.identity_failed |= !holds;
        self.value(key, holds)
    }
}

fn exact_list(vs: &[Rational]) -> Value {
    vs.iter().map(|v| Value::String(v.to_string())).collect()
}

fn decimal_list(vs: &[Rational]) -> Value {
    vs.iter()
        .map(|v| Value::String(to_decimal(v, DECIMAL_DIGITS)))
        .collect()
}

/// Reads input documents and lists, hashing everything consumed.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
    stdin_used: bool,
}

impl Inputs {
    pub fn record(&mut self, label: &str, text: &str) {
        self.hasher.update(label.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(text.as_bytes());
        self.hasher.update([0]);
    }

    /// A path, or `-` for stdin.
    pub fn document(&mut self, label: &str, path: &str) -> Result<String> {
        let text = if path == "-" {
            if self.stdin_used {
                return Err(Error::InvalidInput(
                    "stdin can supply only one input".into(),
                ));
            }
            self.stdin_used = true;
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::InvalidInput(format!("{label}: reading stdin: {e}")))?;
            text
        } else {
            fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("{label}: {path}: {e}")))?
        };
        self.record(label, &text);
        Ok(text)
    }

    /// Inline text, `@path` for a file, or `-` for stdin.
    pub fn inline(&mut self, label: &str, arg: &str) -> Result<String> {
        if arg == "-" {
            return self.document(label, "-");
        }
        if let Some(path) = arg.strip_prefix('@') {
            return self.document(label, path);
        }
        self.record(label, arg);
        Ok(arg.to_string())
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

pub fn caps() -> Value {
    json!({
        "enumeration": limits::enumeration_cap(),
        "lp": limits::lp_cap(),
    })
}

pub fn run_report(command: &str, digest: String, results: Results, timing_ms: u64) -> Value {
    json!({
        "command": command,
        "inputs_digest": digest,
        "results": Value::Object(results.exact),
        "decimals": Value::Object(results.decimals),
        "timing_ms": timing_ms,
        "caps": caps(),
    })
}

pub fn error_report(command: &str, error: &Error) -> Value {
    json!({
        "command": command,
        "error": {
            "kind": error.kind(),
            "message": error.to_string(),
        },
        "caps": caps(),
    })
}
