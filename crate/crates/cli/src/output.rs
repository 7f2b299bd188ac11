//! Result tables, headline numbers and their on-disk form.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Format;

/// A column-oriented numeric table; one per output file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    /// `(name, unit)`; an empty unit means dimensionless.
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|(c, u)| (c.to_string(), u.to_string())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }
}

/// Expected value and absolute tolerance for a headline number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Target {
    pub expected: f64,
    pub tolerance: f64,
    /// Where the expected value comes from.
    pub source: String,
}

impl Target {
    pub fn absolute(expected: f64, tolerance: f64, source: &str) -> Self {
        Self {
            expected,
            tolerance,
            source: source.to_string(),
        }
    }

    pub fn relative(expected: f64, fraction: f64, source: &str) -> Self {
        Self::absolute(expected, (expected * fraction).abs(), source)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Headline {
    pub name: String,
    pub value: f64,
    pub error: Option<f64>,
    pub unit: String,
    pub target: Option<Target>,
}

impl Headline {
    pub fn new(name: &str, value: f64, unit: &str) -> Self {
        Self {
            name: name.to_string(),
            value,
            error: None,
            unit: unit.to_string(),
            target: None,
        }
    }

    pub fn with_error(mut self, error: f64) -> Self {
        self.error = Some(error);
        self
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = Some(target);
        self
    }

    pub fn passed(&self) -> Option<bool> {
        self.target
            .as_ref()
            .map(|t| (self.value - t.expected).abs() <= t.tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub version: String,
    pub seed: u64,
    /// Normalised config text the run used.
    pub input: String,
    pub headlines: Vec<Headline>,
    pub files: Vec<PathBuf>,
    pub wall_clock_s: f64,
}

impl ScenarioReport {
    /// True when any headline misses its target.
    pub fn missed_targets(&self) -> bool {
        self.headlines.iter().any(|h| h.passed() == Some(false))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {} (seed {}, qdcavity {})", self.scenario, self.seed, self.version);
        for h in &self.headlines {
            let err = h.error.map(|e| format!(" ± {}", fmt_sig(e))).unwrap_or_default();
            let _ = write!(s, "  {:<28} {}{} {}", h.name, fmt_sig(h.value), err, h.unit);
            if let (Some(t), Some(ok)) = (&h.target, h.passed()) {
                let _ = write!(
                    s,
                    "   [{}: {} ± {} — {}]",
                    if ok { "PASS" } else { "FAIL" },
                    fmt_sig(t.expected),
                    fmt_sig(t.tolerance),
                    t.source
                );
            }
            s.push('\n');
        }
        for f in &self.files {
            let _ = writeln!(s, "  wrote {}", f.display());
        }
        let _ = writeln!(s, "  {:.2} s", self.wall_clock_s);
        s
    }
}

fn fmt_sig(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

/// File contents for `table`. The `#` metadata lines come first in CSV and
/// under `"metadata"` in JSON; no timing information is included, so equal
/// inputs give identical bytes.
pub fn render(table: &Table, format: Format, metadata: &[(&str, String)]) -> String {
    match format {
        Format::Csv => {
            let mut s = String::new();
            for (k, v) in metadata {
                let _ = writeln!(s, "# {k}: {v}");
            }
            let header: Vec<String> = table
                .columns
                .iter()
                .map(|(c, u)| if u.is_empty() { c.clone() } else { format!("{c} [{u}]") })
                .collect();
            let _ = writeln!(s, "{}", header.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Column<'a> {
                name: &'a str,
                unit: &'a str,
            }
            let meta: serde_json::Map<String, serde_json::Value> = metadata
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                .collect();
            let doc = serde_json::json!({
                "metadata": meta,
                "columns": table.columns.iter().map(|(n, u)| Column { name: n, unit: u }).collect::<Vec<_>>(),
                "rows": table.rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serialisable");
            s.push('\n');
            s
        }
    }
}

pub fn write_table(
    dir: &Path,
    scenario: &str,
    table: &Table,
    format: Format,
    metadata: &[(&str, String)],
) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{scenario}_{}.{}", table.name, format.extension()));
    std::fs::write(&path, render(table, format, metadata))?;
    Ok(path)
}
