pub mod biqae;
pub mod grover;
pub mod mtda;
pub mod qaoa;
pub mod repro;
pub mod tiger;
pub mod track;
pub mod zne;

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{BenchError, Result};

/// `;`-joined fixed-precision vector for a single CSV cell.
pub fn join(v: &[f64]) -> Value {
    json!(v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(";"))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))
}

pub fn millis(d: std::time::Duration) -> Value {
    json!(d.as_secs_f64() * 1e3)
}
