//! Structured reports: per-check verdicts, witnesses, and the JSON and
//! markdown renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A hypothesis could not be established, so the implication was not
    /// checked.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub verdict: Verdict,
    /// Passing only relative to a finite battery of test cells.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub battery_relative: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    /// An instance document that reproduces the failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool) -> Self {
        Check {
            id: id.into(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            battery_relative: false,
            detail: String::new(),
            witness: None,
        }
    }

    pub fn skipped(id: impl Into<String>, why: impl Into<String>) -> Self {
        Check { verdict: Verdict::Skipped, detail: why.into(), ..Check::new(id, true) }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn battery_relative(mut self) -> Self {
        self.battery_relative = true;
        self
    }

    /// Attaches the witness only when the check failed.
    pub fn witness_on_fail(mut self, witness: impl FnOnce() -> serde_json::Value) -> Self {
        if self.verdict == Verdict::Fail {
            self.witness = Some(witness());
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set when the section ran no checks, so that its pass is vacuous.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
    pub checks: Vec<Check>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section { name: name.into(), notes: Vec::new(), vacuous: false, checks: Vec::new() }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Marks an empty section as vacuous.
    pub fn finish(mut self) -> Self {
        self.vacuous = self.checks.is_empty();
        self
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Verdict::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub battery_relative: usize,
    pub vacuous_sections: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u64,
    pub sections_ms: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub parameters: Parameters,
    pub summary: Summary,
    pub sections: Vec<Section>,
    /// Excluded from determinism comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Md,
}

impl Report {
    pub fn new(command: impl Into<String>, parameters: Parameters) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            parameters,
            summary: Summary::default(),
            sections: Vec::new(),
            timing: None,
        }
    }

    /// Adds a section and refreshes the summary.
    pub fn push(&mut self, section: Section, elapsed_ms: Option<u64>) {
        if let Some(ms) = elapsed_ms {
            self.timing.get_or_insert_with(Timing::default).sections_ms.push((section.name.clone(), ms));
        }
        self.sections.push(section);
        self.summarize();
    }

    pub fn summarize(&mut self) {
        let all = self.sections.iter().flat_map(|s| &s.checks);
        let mut s = Summary::default();
        for c in all {
            s.checks += 1;
            match c.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Skipped => s.skipped += 1,
            }
            s.battery_relative += usize::from(c.battery_relative && c.verdict == Verdict::Pass);
        }
        s.vacuous_sections = self.sections.iter().filter(|x| x.vacuous).map(|x| x.name.clone()).collect();
        self.summary = s;
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn without_timing(&self) -> Report {
        Report { timing: None, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Report, ReportError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let p = &self.parameters;
        let _ = writeln!(out, "# equip {}\n", self.command);
        let _ = write!(out, "truncation L = {}", p.bound);
        if let Some(seed) = p.seed {
            let _ = write!(out, ", seed {seed}");
        }
        if let Some(cases) = p.cases {
            let _ = write!(out, ", {cases} cases per suite");
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n\n{} checks: {} pass ({} battery-relative), {} fail, {} skipped\n",
            s.checks, s.pass, s.battery_relative, s.fail, s.skipped
        );
        let _ = writeln!(out, "| section | pass | fail | skipped | |\n|---|---|---|---|---|");
        for sec in &self.sections {
            let flag = if sec.vacuous {
                "vacuous"
            } else if sec.passed() {
                "PASS"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                sec.name,
                sec.count(Verdict::Pass),
                sec.count(Verdict::Fail),
                sec.count(Verdict::Skipped),
                flag
            );
        }
        for sec in &self.sections {
            if sec.notes.is_empty() && sec.passed() {
                continue;
            }
            let _ = writeln!(out, "\n## {}\n", sec.name);
            for n in &sec.notes {
                let _ = writeln!(out, "- {n}");
            }
            for c in sec.failures() {
                let _ = writeln!(out, "- FAIL `{}`: {}", c.id, c.detail);
            }
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "\nelapsed {} ms", t.total_ms);
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String, ReportError> {
        match format {
            Format::Json => self.to_json(),
            Format::Md => Ok(self.to_markdown()),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<(), ReportError> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}
