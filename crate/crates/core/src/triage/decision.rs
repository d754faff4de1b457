use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::deviation::{validate_deviation, DeviationRecord, RejectReason};
use crate::findings::{Finding, FindingRef};
use crate::guideline_db::{Category, GuidelineDb};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A fix is planned.
    Comply,
    Deviate {
        record: String,
    },
    /// Non-compliance documented; advisory guidelines only.
    Documented,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub finding: FindingRef,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecisionRejection {
    Deviation(RejectReason),
    DocumentedRequiresAdvisory,
    RecordGuidelineMismatch,
}

impl DecisionRejection {
    pub fn code(self) -> &'static str {
        match self {
            DecisionRejection::Deviation(r) => r.code(),
            DecisionRejection::DocumentedRequiresAdvisory => "DocumentedRequiresAdvisory",
            DecisionRejection::RecordGuidelineMismatch => "RecordGuidelineMismatch",
        }
    }
}

impl fmt::Display for DecisionRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("decision references missing finding `{0}`")]
    DanglingFinding(String),
    #[error("decision references missing deviation record `{0}`")]
    DanglingRecord(String),
    #[error("decision rejected: {0}")]
    Rejected(DecisionRejection),
}

/// Checks a decision against the current findings, records and categories.
pub fn check_decision(
    decision: &Decision,
    findings: &[Finding],
    refs: &[FindingRef],
    records: &[DeviationRecord],
    db: &GuidelineDb,
) -> Result<(), DecisionError> {
    let finding = refs
        .iter()
        .position(|r| *r == decision.finding)
        .map(|i| &findings[i])
        .ok_or_else(|| DecisionError::DanglingFinding(decision.finding.clone()))?;
    let category = db.effective_category(finding.guideline).map_err(|_| {
        DecisionError::Rejected(DecisionRejection::Deviation(RejectReason::UnknownGuideline))
    })?;
    match &decision.verdict {
        Verdict::Comply => Ok(()),
        Verdict::Documented => {
            if category == Category::Advisory {
                Ok(())
            } else {
                Err(DecisionError::Rejected(
                    DecisionRejection::DocumentedRequiresAdvisory,
                ))
            }
        }
        Verdict::Deviate { record } => {
            if category == Category::Mandatory {
                return Err(DecisionError::Rejected(DecisionRejection::Deviation(
                    RejectReason::MandatoryNoDeviation,
                )));
            }
            let record = records
                .iter()
                .find(|r| r.id == *record)
                .ok_or_else(|| DecisionError::DanglingRecord(record.clone()))?;
            if record.guideline != finding.guideline {
                return Err(DecisionError::Rejected(
                    DecisionRejection::RecordGuidelineMismatch,
                ));
            }
            validate_deviation(record, db)
                .map(|_| ())
                .map_err(|r| DecisionError::Rejected(DecisionRejection::Deviation(r)))
        }
    }
}

/// Last decision per finding, in finding-ref order.
pub fn latest_decisions(decisions: &[Decision]) -> BTreeMap<&str, &Decision> {
    decisions.iter().map(|d| (d.finding.as_str(), d)).collect()
}

/// Append-only decision store backed by a JSON Lines file.
#[derive(Debug, Default)]
pub struct DecisionLog {
    path: Option<PathBuf>,
    entries: Vec<Decision>,
}

impl DecisionLog {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads an existing log; a missing file is an empty log.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e),
        };
        let entries = parse_decisions(&text)?;
        Ok(Self {
            path: Some(path),
            entries,
        })
    }

    pub fn entries(&self) -> &[Decision] {
        &self.entries
    }

    pub fn append(&mut self, decision: Decision) -> io::Result<()> {
        if let Some(path) = &self.path {
            let mut line = serde_json::to_string(&decision).map_err(io::Error::other)?;
            line.push('\n');
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            file.write_all(line.as_bytes())?;
            file.flush()?;
        }
        self.entries.push(decision);
        Ok(())
    }
}

pub fn parse_decisions(text: &str) -> io::Result<Vec<Decision>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str(l).map_err(|e| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("decisions line {}: {e}", n + 1),
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findings::finding_refs;
    use chrono::NaiveDate;

    fn finding(guideline: &str) -> Finding {
        Finding {
            tool: "t".into(),
            guideline: guideline.parse().unwrap(),
            file: "a.c".into(),
            line: 1,
            column: None,
            message: "m".into(),
        }
    }

    fn record(id: &str, guideline: &str, justification: &str) -> DeviationRecord {
        DeviationRecord {
            id: id.into(),
            guideline: guideline.parse().unwrap(),
            applies_to: "src/**".into(),
            justification: justification.into(),
            approver: "QA".into(),
            date: NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
        }
    }

    #[test]
    fn wire_format() {
        let d: Decision = serde_json::from_str(
            r#"{"finding":"F1","verdict":"deviate","record":"DEV-1","note":"n"}"#,
        )
        .unwrap();
        assert_eq!(
            d.verdict,
            Verdict::Deviate {
                record: "DEV-1".into()
            }
        );
        let d: Decision = serde_json::from_str(r#"{"finding":"F1","verdict":"comply"}"#).unwrap();
        assert_eq!(d.verdict, Verdict::Comply);
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"finding":"F1","verdict":"comply","note":""}"#
        );
        assert!(serde_json::from_str::<Decision>(r#"{"finding":"F1","verdict":"maybe"}"#).is_err());
    }

    #[test]
    fn decision_rules() {
        let db = GuidelineDb::bundled();
        // R9.1 mandatory, D4.12 required, D4.6 advisory
        let findings = vec![finding("R9.1"), finding("D4.12"), finding("D4.6")];
        let refs = finding_refs(&findings);
        let records = vec![
            record("DEV-M", "R9.1", "j"),
            record("DEV-R", "D4.12", "pool allocator"),
            record("DEV-R-EMPTY", "D4.12", ""),
        ];
        let check = |i: usize, verdict: Verdict| {
            let d = Decision {
                finding: refs[i].clone(),
                verdict,
                note: String::new(),
            };
            check_decision(&d, &findings, &refs, &records, db)
        };
        let deviate = |r: &str| Verdict::Deviate { record: r.into() };

        assert_eq!(check(0, Verdict::Comply), Ok(()));
        assert_eq!(
            check(0, deviate("DEV-M")),
            Err(DecisionError::Rejected(DecisionRejection::Deviation(
                RejectReason::MandatoryNoDeviation
            )))
        );
        assert_eq!(
            check(0, deviate("nope")),
            Err(DecisionError::Rejected(DecisionRejection::Deviation(
                RejectReason::MandatoryNoDeviation
            )))
        );
        assert_eq!(check(1, deviate("DEV-R")), Ok(()));
        assert_eq!(
            check(1, deviate("DEV-R-EMPTY")),
            Err(DecisionError::Rejected(DecisionRejection::Deviation(
                RejectReason::MissingJustification
            )))
        );
        assert_eq!(
            check(1, deviate("nope")),
            Err(DecisionError::DanglingRecord("nope".into()))
        );
        assert_eq!(
            check(2, deviate("DEV-R")),
            Err(DecisionError::Rejected(
                DecisionRejection::RecordGuidelineMismatch
            ))
        );
        assert_eq!(
            check(1, Verdict::Documented),
            Err(DecisionError::Rejected(
                DecisionRejection::DocumentedRequiresAdvisory
            ))
        );
        assert_eq!(check(2, Verdict::Documented), Ok(()));

        let dangling = Decision {
            finding: "Fmissing".into(),
            verdict: Verdict::Comply,
            note: String::new(),
        };
        assert_eq!(
            check_decision(&dangling, &findings, &refs, &records, db),
            Err(DecisionError::DanglingFinding("Fmissing".into()))
        );
    }

    #[test]
    fn log_appends_and_reloads() {
        let dir = std::env::temp_dir().join(format!("decision-log-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("decisions.jsonl");
        let _ = fs::remove_file(&path);
        let mut log = DecisionLog::open(&path).unwrap();
        assert!(log.entries().is_empty());
        let a = Decision {
            finding: "F1".into(),
            verdict: Verdict::Comply,
            note: String::new(),
        };
        let b = Decision {
            finding: "F1".into(),
            verdict: Verdict::Documented,
            note: "later".into(),
        };
        log.append(a).unwrap();
        log.append(b.clone()).unwrap();
        let reloaded = DecisionLog::open(&path).unwrap();
        assert_eq!(reloaded.entries().len(), 2);
        let latest = latest_decisions(reloaded.entries());
        assert_eq!(latest["F1"], &b);
        fs::write(&path, "{broken\n").unwrap();
        assert!(DecisionLog::open(&path).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
