//! Structured verification results: named tables plus pass/fail checks.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    /// Deterministic text form used in CSV output.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header of table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().filter_map(|r| r[i].as_f64()).collect())
    }
}

/// One verdict. `value` is compared with `bound` through `relation`
/// (for instance `value <= bound`); FAIL rows carry both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub relation: String,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    pub fn at_most(name: &str, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        let ok = value <= bound;
        Self::build(name, ok, value, "<=", bound, detail)
    }

    pub fn greater_than(name: &str, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        let ok = value > bound;
        Self::build(name, ok, value, ">", bound, detail)
    }

    pub fn info(name: &str, value: f64, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), status: Status::Info, value, relation: String::new(), bound: f64::NAN, detail: detail.into() }
    }

    fn build(name: &str, ok: bool, value: f64, relation: &str, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            relation: relation.to_string(),
            bound,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub suite: String,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl DiagnosticsReport {
    pub fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), ..Self::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends another report's tables and checks, prefixing their names.
    pub fn merge(&mut self, prefix: &str, other: DiagnosticsReport) {
        for mut t in other.tables {
            t.name = format!("{prefix}{}", t.name);
            self.tables.push(t);
        }
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_rendering() {
        let mut r = DiagnosticsReport::new("x");
        assert!(r.passed());
        r.checks.push(Check::at_most("a", 1.0, 2.0, ""));
        r.checks.push(Check::info("b", 3.0, ""));
        assert!(r.passed());
        r.checks.push(Check::greater_than("c", 0.0, 0.0, "floor"));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(Cell::Num(0.5).render(), "5.0000000000000000e-1");
        assert_eq!(Cell::from(3usize).render(), "3");
    }
}
