//! Machine-readable reports: JSON (full) and CSV (per-point rows), plus the
//! human summary printed to standard output.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct PointRow {
    pub z: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub values: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySummary {
    pub name: String,
    pub max_residual: f64,
    pub budget: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    pub version: String,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub surface: String,
    pub frames: Vec<String>,
    /// records which normal orientation the numbers refer to
    pub orientation: String,
    pub timestamp: String,
    pub points: Vec<PointRow>,
    pub identities: Vec<IdentitySummary>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config_hash: String) -> Report {
        Report {
            schema: 1,
            command: command.to_string(),
            suite: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            seed: None,
            surface: String::new(),
            frames: Vec::new(),
            orientation: "b3 as supplied by the frame specification (no sign normalization)"
                .to_string(),
            timestamp: timestamp(),
            points: Vec::new(),
            identities: Vec::new(),
            pass: true,
        }
    }

    /// Scan the rows for `res.<name>` keys and summarize each against its
    /// budget; the summary maxima are by construction the row maxima.
    pub fn summarize(&mut self, budgets: &BTreeMap<String, f64>) {
        let mut maxima: BTreeMap<String, f64> = BTreeMap::new();
        for row in &self.points {
            for (key, value) in &row.values {
                if let Some(name) = key.strip_prefix("res.") {
                    let entry = maxima.entry(name.to_string()).or_insert(0.0);
                    if value.abs() > *entry {
                        *entry = value.abs();
                    }
                }
            }
        }
        for (name, max) in maxima {
            let budget = budgets.get(&name).copied().unwrap_or(1e-7);
            let pass = max <= budget;
            if !pass {
                self.pass = false;
            }
            self.identities.push(IdentitySummary {
                name,
                max_residual: max,
                budget,
                pass,
            });
        }
    }

    pub fn print_summary(&self) {
        println!(
            "== {} {} | surface {} | frames {:?}",
            self.command,
            self.suite.as_deref().unwrap_or(""),
            self.surface,
            self.frames
        );
        for id in &self.identities {
            println!(
                "{} {:<40} max {:.3e}  budget {:.1e}",
                if id.pass { "PASS" } else { "FAIL" },
                id.name,
                id.max_residual,
                id.budget
            );
        }
        println!(
            "{}: {} point rows, {} identities",
            if self.pass { "OK" } else { "FAILED" },
            self.points.len(),
            self.identities.len()
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn write_json(&self, path: &str) -> Result<()> {
        std::fs::write(path, self.to_json())
            .map_err(|e| Error::Other(format!("cannot write {path}: {e}")))
    }

    pub fn write_csv(&self, path: &str) -> Result<()> {
        let mut keys: Vec<String> = Vec::new();
        for row in &self.points {
            for key in row.values.keys() {
                if !keys.contains(key) {
                    keys.push(key.clone());
                }
            }
        }
        keys.sort();
        let mut wtr = csv::Writer::from_path(path)
            .map_err(|e| Error::Other(format!("cannot write {path}: {e}")))?;
        let mut header = vec![
            "z1".to_string(),
            "z2".to_string(),
            "s".to_string(),
            "label".to_string(),
        ];
        header.extend(keys.iter().cloned());
        wtr.write_record(&header)
            .map_err(|e| Error::Other(e.to_string()))?;
        for row in &self.points {
            let mut rec = vec![
                format!("{:.17e}", row.z[0]),
                format!("{:.17e}", row.z[1]),
                row.s.map(|s| format!("{s:.17e}")).unwrap_or_default(),
                row.label.clone().unwrap_or_default(),
            ];
            for key in &keys {
                rec.push(
                    row.values
                        .get(key)
                        .map(|v| format!("{v:.17e}"))
                        .unwrap_or_default(),
                );
            }
            wtr.write_record(&rec)
                .map_err(|e| Error::Other(e.to_string()))?;
        }
        wtr.flush().map_err(|e| Error::Other(e.to_string()))
    }
}

fn timestamp() -> String {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}.{:09}", now.as_secs(), now.subsec_nanos())
}
