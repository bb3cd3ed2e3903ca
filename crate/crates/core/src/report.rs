//! Validation reports shared by every checker.

use std::fmt;

/// One failed axiom together with the basis tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    /// Basis tuple, written with indices only, e.g. `(0,1)` or
    /// `(a0*e{0,2}, a1*e{1})`.
    pub witness: String,
    /// Human-readable residual; not part of any stable interface.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.axiom, self.witness)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// A list of violations; empty means every checked identity holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: impl Into<String>, witness: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation { axiom: axiom.into(), witness: witness.into(), detail: detail.into() });
    }

    /// Records a violation only if `axiom` has not failed yet.
    pub fn push_first(&mut self, axiom: &str, witness: impl Into<String>, detail: impl Into<String>) {
        if !self.has(axiom) {
            self.push(axiom, witness, detail);
        }
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn first(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Prefixes every axiom name, used when a sub-report is folded into a
    /// larger one.
    pub fn scoped(mut self, scope: &str) -> Self {
        for v in &mut self.violations {
            v.axiom = format!("{scope}.{}", v.axiom);
        }
        self
    }
}

/// Formats an index tuple as `(i,j,k)`.
pub fn tuple(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}
