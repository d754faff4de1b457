use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::decision::{latest_decisions, Decision, Verdict};
use super::deviation::{validate_deviation, DeviationRecord};
use crate::findings::{finding_refs, Finding};
use crate::guideline_db::{Category, GuidelineDb, GuidelineId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GuidelineStatus {
    Clean,
    /// Every finding is covered by a valid deviation or, for advisory
    /// guidelines, a documented non-compliance.
    Deviated,
    Violating,
}

/// Binary claim. There is no partial compliance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallClaim {
    CompliancePlausible,
    NotCompliant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuidelineSummary {
    pub guideline: GuidelineId,
    pub category: Category,
    pub findings: usize,
    pub deviated: usize,
    pub documented: usize,
    pub status: GuidelineStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplianceSummary {
    pub guidelines: Vec<GuidelineSummary>,
    /// Disapplied guidelines, left out of the rollup.
    pub disapplied: Vec<GuidelineId>,
    pub overall: OverallClaim,
}

impl ComplianceSummary {
    pub fn get(&self, id: GuidelineId) -> Option<&GuidelineSummary> {
        self.guidelines.iter().find(|g| g.guideline == id)
    }

    pub fn count(&self, status: GuidelineStatus) -> usize {
        self.guidelines
            .iter()
            .filter(|g| g.status == status)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DanglingReference {
    #[error("decision references missing finding `{0}`")]
    Finding(String),
    #[error("decision references missing deviation record `{0}`")]
    Record(String),
}

/// Per-guideline rollup of findings and decisions plus the overall claim.
///
/// A finding only stops counting against its guideline when its latest
/// decision is a valid deviation, or a documented non-compliance on an
/// advisory guideline. A planned fix leaves it violating until the analyzer
/// stops reporting it.
pub fn compliance_summary(
    findings: &[Finding],
    decisions: &[Decision],
    records: &[DeviationRecord],
    db: &GuidelineDb,
) -> Result<ComplianceSummary, DanglingReference> {
    let refs = finding_refs(findings);
    let by_ref: BTreeMap<&str, &Finding> = refs.iter().map(String::as_str).zip(findings).collect();
    for d in decisions {
        if !by_ref.contains_key(d.finding.as_str()) {
            return Err(DanglingReference::Finding(d.finding.clone()));
        }
        if let Verdict::Deviate { record } = &d.verdict {
            if !records.iter().any(|r| r.id == *record) {
                return Err(DanglingReference::Record(record.clone()));
            }
        }
    }
    let latest = latest_decisions(decisions);

    #[derive(Default)]
    struct Tally {
        findings: usize,
        deviated: usize,
        documented: usize,
    }
    let mut tallies: BTreeMap<GuidelineId, Tally> = BTreeMap::new();
    for (r, finding) in refs.iter().zip(findings) {
        let Ok(category) = db.effective_category(finding.guideline) else {
            continue;
        };
        let tally = tallies.entry(finding.guideline).or_default();
        tally.findings += 1;
        match latest.get(r.as_str()).map(|d| &d.verdict) {
            Some(Verdict::Deviate { record }) => {
                let record = records
                    .iter()
                    .find(|x| x.id == *record)
                    .expect("checked above");
                if record.guideline == finding.guideline && validate_deviation(record, db).is_ok() {
                    tally.deviated += 1;
                }
            }
            Some(Verdict::Documented) if category == Category::Advisory => tally.documented += 1,
            _ => {}
        }
    }

    let mut guidelines = Vec::new();
    let mut disapplied = Vec::new();
    for g in db.iter() {
        if g.disapplied {
            disapplied.push(g.id);
            continue;
        }
        let tally = tallies.remove(&g.id).unwrap_or_default();
        let status = if tally.findings == 0 {
            GuidelineStatus::Clean
        } else if tally.deviated + tally.documented == tally.findings {
            GuidelineStatus::Deviated
        } else {
            GuidelineStatus::Violating
        };
        guidelines.push(GuidelineSummary {
            guideline: g.id,
            category: g.category,
            findings: tally.findings,
            deviated: tally.deviated,
            documented: tally.documented,
            status,
        });
    }
    let overall = if guidelines
        .iter()
        .any(|g| g.status == GuidelineStatus::Violating)
    {
        OverallClaim::NotCompliant
    } else {
        OverallClaim::CompliancePlausible
    };
    Ok(ComplianceSummary {
        guidelines,
        disapplied,
        overall,
    })
}

/// Plain-text table of the guidelines with findings, followed by totals.
pub fn render_summary_text(summary: &ComplianceSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<9} {:<10} {:>8} {:>8} {:>10}  status",
        "guideline", "category", "findings", "deviated", "documented"
    );
    for g in summary.guidelines.iter().filter(|g| g.findings > 0) {
        let status = match g.status {
            GuidelineStatus::Clean => "clean",
            GuidelineStatus::Deviated => "deviated",
            GuidelineStatus::Violating => "violating",
        };
        let _ = writeln!(
            out,
            "{:<9} {:<10} {:>8} {:>8} {:>10}  {status}",
            g.guideline.to_string(),
            g.category.as_str(),
            g.findings,
            g.deviated,
            g.documented
        );
    }
    let _ = writeln!(
        out,
        "\nguidelines: {} (clean {}, deviated {}, violating {}); disapplied: {}",
        summary.guidelines.len(),
        summary.count(GuidelineStatus::Clean),
        summary.count(GuidelineStatus::Deviated),
        summary.count(GuidelineStatus::Violating),
        summary.disapplied.len()
    );
    let overall = match summary.overall {
        OverallClaim::CompliancePlausible => "compliance plausible (code-facing records only)",
        OverallClaim::NotCompliant => "NOT COMPLIANT",
    };
    let _ = writeln!(out, "overall: {overall}");
    out
}
