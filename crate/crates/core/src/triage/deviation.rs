use std::collections::HashSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::guideline_db::{Category, GuidelineDb, GuidelineId};

/// A recorded, justified non-compliance with one guideline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationRecord {
    /// Key that decisions use to point at this record.
    pub id: String,
    pub guideline: GuidelineId,
    /// Path or glob the deviation covers.
    pub applies_to: String,
    pub justification: String,
    pub approver: String,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    MandatoryNoDeviation,
    MissingJustification,
    MissingApprover,
    MissingScope,
    UnknownGuideline,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::MandatoryNoDeviation => "MandatoryNoDeviation",
            RejectReason::MissingJustification => "MissingJustification",
            RejectReason::MissingApprover => "MissingApprover",
            RejectReason::MissingScope => "MissingScope",
            RejectReason::UnknownGuideline => "UnknownGuideline",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Accepted {
    pub warnings: Vec<String>,
}

pub const UNKNOWN_CATEGORY_WARNING: &str = "category unknown, treated as Required";

/// Checks a record against the effective category of its guideline.
///
/// Mandatory guidelines cannot be deviated. Required ones need a
/// justification, an approver and a scope. Advisory ones accept any record.
/// Unknown categories are checked as Required and carry a warning.
pub fn validate_deviation(
    record: &DeviationRecord,
    db: &GuidelineDb,
) -> Result<Accepted, RejectReason> {
    let guideline = db
        .lookup(record.guideline)
        .map_err(|_| RejectReason::UnknownGuideline)?;
    let mut accepted = Accepted::default();
    match guideline.category {
        Category::Mandatory => return Err(RejectReason::MandatoryNoDeviation),
        Category::Advisory => return Ok(accepted),
        Category::Unknown => accepted.warnings.push(UNKNOWN_CATEGORY_WARNING.to_string()),
        Category::Required => {}
    }
    if record.justification.trim().is_empty() {
        return Err(RejectReason::MissingJustification);
    }
    if record.approver.trim().is_empty() {
        return Err(RejectReason::MissingApprover);
    }
    if record.applies_to.trim().is_empty() {
        return Err(RejectReason::MissingScope);
    }
    Ok(accepted)
}

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error("deviation records: {0}")]
    Json(#[from] serde_json::Error),
    #[error("deviation records: duplicate record id `{0}`")]
    DuplicateId(String),
}

/// Parses a JSON array of deviation records. Record ids must be unique.
pub fn parse_deviation_records(text: &str) -> Result<Vec<DeviationRecord>, RecordsError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let records: Vec<DeviationRecord> = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    for r in &records {
        if !seen.insert(r.id.as_str()) {
            return Err(RecordsError::DuplicateId(r.id.clone()));
        }
    }
    Ok(records)
}
