//! Analyzer findings in a neutral JSON Lines interchange format.
//!
//! Each input line is one object with the fields `tool`, `guideline`, `file`,
//! `line`, optional `column`, and `message`. Lines that cannot be bound to a
//! guideline are reported as diagnostics and dropped; the batch never aborts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::guideline_db::{GuidelineDb, GuidelineId, RationaleSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Finding {
    pub tool: String,
    pub guideline: GuidelineId,
    pub file: String,
    pub line: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<u32>,
    pub message: String,
}

impl Finding {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("finding serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum DiagnosticReason {
    InvalidRecord(String),
    MalformedId(String),
    UnknownGuideline(String),
    InvalidLocation(String),
}

impl fmt::Display for DiagnosticReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticReason::InvalidRecord(d) => write!(f, "InvalidRecord: {d}"),
            DiagnosticReason::MalformedId(d) => write!(f, "MalformedId: {d}"),
            DiagnosticReason::UnknownGuideline(d) => write!(f, "UnknownGuideline: {d}"),
            DiagnosticReason::InvalidLocation(d) => write!(f, "InvalidLocation: {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    #[serde(flatten)]
    pub reason: DiagnosticReason,
}

impl fmt::Display for Diagnostic {
    /// `ingest:<line-no>:<reason>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ingest:{}:{}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOutcome {
    pub findings: Vec<Finding>,
    pub diagnostics: Vec<Diagnostic>,
}

// Wire shape with an unparsed guideline so id errors get their own diagnostic.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFinding {
    tool: String,
    guideline: String,
    file: String,
    line: u32,
    #[serde(default)]
    column: Option<u32>,
    message: String,
}

/// Parses a JSON Lines stream and binds each record to `db`. Blank lines are
/// skipped silently.
pub fn parse_findings(stream: &str, db: &GuidelineDb) -> IngestOutcome {
    let mut out = IngestOutcome::default();
    for (n, text) in stream.lines().enumerate() {
        if text.trim().is_empty() {
            continue;
        }
        match parse_line(text, db) {
            Ok(finding) => out.findings.push(finding),
            Err(reason) => out.diagnostics.push(Diagnostic {
                line: n + 1,
                reason,
            }),
        }
    }
    out
}

fn parse_line(text: &str, db: &GuidelineDb) -> Result<Finding, DiagnosticReason> {
    let raw: RawFinding =
        serde_json::from_str(text).map_err(|e| DiagnosticReason::InvalidRecord(e.to_string()))?;
    let guideline = GuidelineId::parse(&raw.guideline)
        .map_err(|_| DiagnosticReason::MalformedId(raw.guideline.clone()))?;
    if !db.contains(guideline) {
        return Err(DiagnosticReason::UnknownGuideline(guideline.to_string()));
    }
    if raw.line == 0 {
        return Err(DiagnosticReason::InvalidLocation(
            "line must be >= 1".into(),
        ));
    }
    if raw.column == Some(0) {
        return Err(DiagnosticReason::InvalidLocation(
            "column must be >= 1".into(),
        ));
    }
    Ok(Finding {
        tool: raw.tool,
        guideline,
        file: raw.file,
        line: raw.line,
        column: raw.column,
        message: raw.message,
    })
}

pub fn to_jsonl(findings: &[Finding]) -> String {
    let mut out = String::new();
    for f in findings {
        out.push_str(&f.to_json_line());
        out.push('\n');
    }
    out
}

/// Stable reference to a finding, used by triage decisions.
///
/// Derived from the record content plus its occurrence number among identical
/// records, so it survives reordering of the input.
pub type FindingRef = String;

pub fn finding_refs(findings: &[Finding]) -> Vec<FindingRef> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    findings
        .iter()
        .map(|f| {
            let line = f.to_json_line();
            let occurrence = seen.entry(line.clone()).or_insert(0);
            let mut hasher = Sha256::new();
            hasher.update(line.as_bytes());
            hasher.update(b"#");
            hasher.update(occurrence.to_string().as_bytes());
            *occurrence += 1;
            let digest = hasher.finalize();
            let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
            format!("F{hex}")
        })
        .collect()
}

/// Findings bucketed by rationale set. Dual-member findings appear in both
/// buckets; `distinct_total` counts each finding once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FindingSetView {
    pub buckets: BTreeMap<RationaleSet, Vec<Finding>>,
    pub distinct_total: usize,
}

impl FindingSetView {
    pub fn bucket(&self, set: RationaleSet) -> &[Finding] {
        self.buckets.get(&set).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn counts(&self) -> BTreeMap<RationaleSet, usize> {
        self.buckets.iter().map(|(s, b)| (*s, b.len())).collect()
    }
}

pub fn classify_by_set(findings: &[Finding], db: &GuidelineDb) -> FindingSetView {
    let mut buckets: BTreeMap<RationaleSet, Vec<Finding>> = RationaleSet::ALL
        .into_iter()
        .map(|s| (s, Vec::new()))
        .collect();
    let mut distinct_total = 0;
    for finding in findings {
        let Ok(sets) = db.sets_of(finding.guideline) else {
            continue;
        };
        distinct_total += 1;
        for set in sets {
            buckets
                .get_mut(set)
                .expect("all sets present")
                .push(finding.clone());
        }
    }
    FindingSetView {
        buckets,
        distinct_total,
    }
}
