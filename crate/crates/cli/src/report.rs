//! Command reports and their two renderings.

use std::fmt::Write;

use lierine_core::ValidationReport;
use serde::Serialize;

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A named list of values, e.g. cohomology dimensions.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub kind: String,
    pub name: String,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
}

impl Section {
    pub fn new(kind: &str, name: &str) -> Self {
        Self { kind: kind.into(), name: name.into(), verdicts: Vec::new(), tables: Vec::new() }
    }

    pub fn verdict(&mut self, check: impl Into<String>, pass: bool) {
        self.verdicts.push(Verdict { check: check.into(), pass, witness: None, detail: None });
    }

    pub fn failure(&mut self, check: impl Into<String>, witness: Option<String>, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.into(), pass: false, witness, detail: Some(detail.into()) });
    }

    /// One verdict from a validation report, witnessed by its first
    /// violation.
    pub fn from_report(&mut self, check: impl Into<String>, report: &ValidationReport) {
        match report.violations.first() {
            None => self.verdict(check, true),
            Some(v) => self.failure(check, Some(format!("{} {}", v.axiom, v.witness)), v.detail.clone()),
        }
    }

    /// A verdict whose witness is the first violation of `axiom`, if any.
    pub fn from_condition(&mut self, check: impl Into<String>, pass: bool, details: &ValidationReport, axiom: &str) {
        if pass {
            self.verdict(check, true);
            return;
        }
        let v = details.violations.iter().find(|v| v.axiom == axiom || v.axiom.starts_with(&format!("{axiom}.")));
        match v {
            Some(v) => self.failure(check, Some(format!("{} {}", v.axiom, v.witness)), v.detail.clone()),
            None => self.verdict(check, false),
        }
    }

    pub fn table(&mut self, name: impl Into<String>, values: Vec<String>) {
        self.tables.push(Table { name: name.into(), values });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    pub status: &'static str,
}

impl Report {
    pub fn new(command: impl Into<String>, sections: Vec<Section>) -> Self {
        let status = if sections.iter().all(Section::passed) { "pass" } else { "fail" };
        Self { command: command.into(), sections, status }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command {}", self.command).unwrap();
        for s in &self.sections {
            writeln!(out, "{} {}", s.kind, s.name).unwrap();
            for v in &s.verdicts {
                write!(out, "  {} {}", if v.pass { "pass" } else { "FAIL" }, v.check).unwrap();
                if let Some(w) = &v.witness {
                    write!(out, " witness {w}").unwrap();
                }
                if let Some(d) = &v.detail {
                    write!(out, " ({d})").unwrap();
                }
                out.push('\n');
            }
            for t in &s.tables {
                writeln!(out, "  {} = [{}]", t.name, t.values.join(", ")).unwrap();
            }
        }
        writeln!(out, "status {}", self.status).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
