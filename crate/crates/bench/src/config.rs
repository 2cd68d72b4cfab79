use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{invalid, BenchError, Result};

/// Parsed `--config` file: top-level keys override global flags, a table
/// named after the subcommand overrides that subcommand's flags.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub table: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| BenchError::Validation(format!("config: {e}")))?;
        Ok(Self { table })
    }

    pub fn globals(&self) -> toml::Table {
        self.table.iter().filter(|(_, v)| !v.is_table()).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn section(&self, name: &str) -> toml::Table {
        match self.table.get(name) {
            Some(toml::Value::Table(t)) => t.clone(),
            _ => toml::Table::new(),
        }
    }
}

/// Replaces fields of `args` by the keys of `table`. Unknown keys are errors.
pub fn overlay<T: Serialize + DeserializeOwned>(args: &T, table: &toml::Table, what: &str) -> Result<T> {
    if table.is_empty() {
        return Ok(serde_json::from_value(serde_json::to_value(args).expect("args serialise")).expect("round trip"));
    }
    let mut v = serde_json::to_value(args).expect("args serialise");
    let obj = v.as_object_mut().expect("args are a struct");
    for (k, val) in table {
        let key = k.replace('-', "_");
        if !obj.contains_key(&key) {
            return invalid(format!("config: unknown {what} key `{k}`"));
        }
        obj.insert(key, serde_json::to_value(val).map_err(|e| BenchError::Validation(e.to_string()))?);
    }
    serde_json::from_value(v).map_err(|e| BenchError::Validation(format!("config: {what}: {e}")))
}

/// Canonical JSON of the resolved run and its SHA-256.
pub fn fingerprint<G: Serialize, A: Serialize>(experiment: &str, global: &G, args: &A) -> (Value, String) {
    let v = json!({ "experiment": experiment, "global": global, "params": args });
    let digest = Sha256::digest(v.to_string().as_bytes());
    (v, hex::encode(digest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    struct A {
        n: usize,
        name: Option<String>,
    }

    #[test]
    fn overlay_replaces_and_rejects() {
        let cfg = ConfigFile::parse("seed = 3\n[x]\nn = 7\nname = \"hi\"\n").unwrap();
        let a = overlay(&A { n: 1, name: None }, &cfg.section("x"), "x").unwrap();
        assert_eq!(a, A { n: 7, name: Some("hi".into()) });
        assert_eq!(cfg.globals().get("seed").and_then(|v| v.as_integer()), Some(3));
        let bad = ConfigFile::parse("[x]\nbogus = 1\n").unwrap();
        assert!(overlay(&A { n: 1, name: None }, &bad.section("x"), "x").is_err());
        assert!(ConfigFile::parse("not toml = = 1").is_err());
    }

    #[test]
    fn hash_is_stable() {
        let (_, h1) = fingerprint("e", &json!({"seed": 1}), &A { n: 1, name: None });
        let (_, h2) = fingerprint("e", &json!({"seed": 1}), &A { n: 1, name: None });
        let (_, h3) = fingerprint("e", &json!({"seed": 2}), &A { n: 1, name: None });
        assert_eq!(h1, h2);
        assert_ne!(h1, h3);
        assert_eq!(h1.len(), 64);
    }
}
