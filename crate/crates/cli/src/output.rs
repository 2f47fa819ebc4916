//! Report emission: one CSV per table, `checks.csv`, and `summary.json`.
//!
//! CSV bodies depend only on the configuration and seed. Wall-clock times
//! and timestamps go to the JSON summary alone.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use radnls::report::{Cell, Check, DiagnosticsReport, Status, Table};
use serde_json::{json, Value};

use crate::config::Config;

pub const SCHEMA_VERSION: u32 = 1;

/// A finished command: its report plus notes and phase timings.
#[derive(Debug, Default)]
pub struct Outcome {
    pub command: String,
    pub report: DiagnosticsReport,
    pub notes: Vec<String>,
    pub timings: Vec<(String, f64)>,
    /// Files written by the command itself, relative to the output directory.
    pub artifacts: Vec<String>,
}

impl Outcome {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), report: DiagnosticsReport::new(command), ..Self::default() }
    }
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' }).collect()
}

pub fn write_csv(table: &Table, path: &Path) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()
}

/// name, status, value, relation, bound, detail.
pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new("checks", &["name", "status", "value", "relation", "bound", "detail"]);
    for c in checks {
        let bound = if c.bound.is_nan() { Cell::from("") } else { c.bound.into() };
        t.push(vec![c.name.as_str().into(), c.status.to_string().into(), c.value.into(), c.relation.as_str().into(), bound, c.detail.as_str().into()]);
    }
    t
}

fn count(report: &DiagnosticsReport, status: Status) -> usize {
    report.checks.iter().filter(|c| c.status == status).count()
}

/// Writes the enabled formats under `dir` and returns the paths written.
pub fn emit_report(outcome: &Outcome, cfg: &Config, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let report = &outcome.report;
    let mut written = Vec::new();
    let mut used = BTreeSet::from(["checks".to_string()]);
    let mut files = Vec::new();
    for t in &report.tables {
        let stem = file_stem(&t.name);
        let mut name = stem.clone();
        let mut k = 2;
        while !used.insert(name.clone()) {
            name = format!("{stem}_{k}");
            k += 1;
        }
        files.push(format!("{name}.csv"));
    }
    if cfg.csv {
        for (t, f) in report.tables.iter().zip(&files) {
            let p = dir.join(f);
            write_csv(t, &p)?;
            written.push(p);
        }
        let p = dir.join("checks.csv");
        write_csv(&checks_table(&report.checks), &p)?;
        written.push(p);
    }
    if cfg.json {
        let tables: Vec<Value> = report
            .tables
            .iter()
            .zip(&files)
            .map(|(t, f)| json!({ "name": t.name, "file": if cfg.csv { Value::from(f.as_str()) } else { Value::Null }, "columns": t.header, "rows": t.rows.len() }))
            .collect();
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        let summary = json!({
            "schema_version": SCHEMA_VERSION,
            "command": outcome.command,
            "suite": report.suite,
            "status": if report.passed() { "PASS" } else { "FAIL" },
            "counts": { "pass": count(report, Status::Pass), "fail": count(report, Status::Fail), "info": count(report, Status::Info) },
            "config": cfg.echo(),
            "checks": report.checks,
            "tables": tables,
            "artifacts": outcome.artifacts,
            "notes": outcome.notes,
            "timings": outcome.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "created_unix": created,
        });
        let p = dir.join("summary.json");
        fs::write(&p, serde_json::to_string_pretty(&summary)? + "\n")?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_safe_and_unique() {
        assert_eq!(file_stem("n3_eps0.01/morawetz"), "n3_eps0_01_morawetz");
        let dir = tempfile::tempdir().unwrap();
        let cfg = Config::from_text("").unwrap();
        let mut o = Outcome::new("x");
        o.report.tables.push(Table::new("a", &["v"]));
        o.report.tables.push(Table::new("a", &["v"]));
        o.report.tables.push(Table::new("checks", &["v"]));
        let files = emit_report(&o, &cfg, dir.path()).unwrap();
        let names: Vec<String> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
        assert_eq!(names, ["a.csv", "a_2.csv", "checks_2.csv", "checks.csv", "summary.json"]);
    }

    #[test]
    fn fields_with_commas_are_quoted() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let mut t = Table::new("t", &["x", "note"]);
        t.push(vec![0.25.into(), "a, \"b\"".into()]);
        write_csv(&t, &p).unwrap();
        assert_eq!(fs::read_to_string(p).unwrap(), "x,note\n2.5000000000000000e-1,\"a, \"\"b\"\"\"\n");
    }
}
