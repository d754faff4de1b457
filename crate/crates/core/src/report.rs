//! Full project report: classification, compliance summary, both plans and
//! deviation-record validation. Every collection is ordered, so the output is
//! a pure function of the inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::findings::{classify_by_set, Finding};
use crate::guideline_db::{GuidelineDb, RationaleSet};
use crate::planner::{plan_greenfield, plan_late, Objectives, Plan};
use crate::triage::{
    compliance_summary, render_summary_text, validate_deviation, ComplianceSummary,
    DanglingReference, Decision, DeviationRecord, OverallClaim,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordCheck {
    pub id: String,
    pub guideline: String,
    /// `accepted` or the rejection code.
    pub result: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub findings: usize,
    pub per_set: BTreeMap<RationaleSet, usize>,
    pub summary: ComplianceSummary,
    pub greenfield: Plan,
    pub late: Plan,
    pub records: Vec<RecordCheck>,
}

impl Report {
    /// Compliant only when the summary says so and every record validates.
    pub fn passes(&self) -> bool {
        self.summary.overall == OverallClaim::CompliancePlausible
            && self.records.iter().all(|r| r.result == "accepted")
    }
}

pub fn check_records(records: &[DeviationRecord], db: &GuidelineDb) -> Vec<RecordCheck> {
    records
        .iter()
        .map(|r| {
            let (result, warnings) = match validate_deviation(r, db) {
                Ok(a) => ("accepted".to_string(), a.warnings),
                Err(reason) => (reason.code().to_string(), Vec::new()),
            };
            RecordCheck {
                id: r.id.clone(),
                guideline: r.guideline.to_string(),
                result,
                warnings,
            }
        })
        .collect()
}

pub fn build_report(
    findings: &[Finding],
    decisions: &[Decision],
    records: &[DeviationRecord],
    db: &GuidelineDb,
    objectives: Objectives,
) -> Result<Report, DanglingReference> {
    Ok(Report {
        findings: findings.len(),
        per_set: classify_by_set(findings, db).counts(),
        summary: compliance_summary(findings, decisions, records, db)?,
        greenfield: plan_greenfield(findings, db, objectives),
        late: plan_late(findings, db),
        records: check_records(records, db),
    })
}

fn plan_outline(out: &mut String, plan: &Plan) {
    let _ = writeln!(out, "plan {}:", plan.strategy);
    for (i, phase) in plan.phases.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {}. {:<10} {:>6}",
            i + 1,
            phase.label,
            phase.distinct
        );
    }
    if !plan.excluded.is_empty() {
        let _ = writeln!(out, "  excluded (disapplied): {}", plan.excluded.len());
    }
}

pub fn render_report_text(report: &Report) -> String {
    let mut out = format!("findings: {}\n\nper rationale set:\n", report.findings);
    for (set, n) in &report.per_set {
        let _ = writeln!(out, "  {:<5} {:>6}  {}", set.code(), n, set.long_name());
    }
    out.push('\n');
    plan_outline(&mut out, &report.greenfield);
    out.push('\n');
    plan_outline(&mut out, &report.late);
    out.push_str("\ndeviation records:\n");
    if report.records.is_empty() {
        out.push_str("  (none)\n");
    }
    for r in &report.records {
        let _ = writeln!(out, "  {:<12} {:<7} {}", r.id, r.guideline, r.result);
        for w in &r.warnings {
            let _ = writeln!(out, "    warning: {w}");
        }
    }
    out.push('\n');
    out.push_str(&render_summary_text(&report.summary));
    out
}

pub fn render_report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
