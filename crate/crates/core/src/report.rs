//! Pass/fail reports shared by the verification routines.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub claims: Vec<Claim>,
    /// Set when the check could not run, e.g. on a degenerate game.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), claims: Vec::new(), skipped: None }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn claim(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.claims.push(Claim { name: name.into(), passed, detail: detail.into() });
        passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        if let Some(why) = &self.skipped {
            writeln!(f, "  skipped({why})")?;
        }
        for c in &self.claims {
            if c.detail.is_empty() {
                writeln!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name)?;
            } else {
                writeln!(f, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
