use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cost::{build_cost_matrix, CostMatrix, DEFAULT_GATE};
use super::kalman::{Measurement, Track};
use super::qubo::QuboInstance;

/// Writes `n_var offset` on the first line, then one `i j value` line per
/// nonzero upper-triangular entry.
pub fn write_triplets<W: Write>(q: &QuboInstance, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", q.n_var(), q.offset)?;
    for (i, j, v) in q.triplets() {
        writeln!(out, "{i} {j} {v}")?;
    }
    Ok(())
}

pub fn triplets_to_string(q: &QuboInstance) -> String {
    let mut buf = Vec::new();
    write_triplets(q, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads the triplet format back into a bare instance. Lines starting with
/// `#` and blank lines are skipped.
pub fn read_triplets<R: BufRead>(input: R) -> Result<QuboInstance> {
    let mut lines = input
        .lines()
        .map(|l| l.map_err(|e| Error::Parse(e.to_string())))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))??;
    let mut it = header.split_whitespace();
    let n: usize = parse(it.next(), "n_var")?;
    let offset: f64 = parse(it.next(), "offset")?;
    let mut q = vec![0.0; n * n];
    for line in lines {
        let line = line?;
        let mut it = line.split_whitespace();
        let i: usize = parse(it.next(), "row")?;
        let j: usize = parse(it.next(), "column")?;
        let v: f64 = parse(it.next(), "value")?;
        if i >= n || j >= n {
            return Err(Error::Parse(format!("entry ({i},{j}) outside {n} variables")));
        }
        q[i * n + j] += v;
    }
    QuboInstance::from_dense(n, q, offset)
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

/// Tracks and measurements for one association frame (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationScenario {
    pub tracks: Vec<Track>,
    pub measurements: Vec<Measurement>,
    #[serde(default = "default_gate")]
    pub gate: f64,
    #[serde(default)]
    pub c_miss: Option<f64>,
    #[serde(default)]
    pub c_fa: Option<f64>,
}

fn default_gate() -> f64 {
    DEFAULT_GATE
}

impl AssociationScenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        for t in &s.tracks {
            Track::new(t.x, t.p)?;
        }
        for m in &s.measurements {
            Measurement::new(m.z, m.r)?;
        }
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    pub fn cost_matrix(&self) -> Result<CostMatrix> {
        let base = build_cost_matrix(&self.tracks, &self.measurements, self.gate, None)?;
        let (m, f) = (self.c_miss.unwrap_or(base.c_miss), self.c_fa.unwrap_or(base.c_fa));
        Ok(base.with_miss_fa(m, f))
    }
}
