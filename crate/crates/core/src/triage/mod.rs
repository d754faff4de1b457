//! Triage support: per-set prompts, guideline checklists, deviation records,
//! comply/deviate/document decisions and the compliance summary.

mod decision;
mod deviation;
mod summary;

pub use decision::{
    check_decision, latest_decisions, parse_decisions, Decision, DecisionError, DecisionLog,
    DecisionRejection, Verdict,
};
pub use deviation::{
    parse_deviation_records, validate_deviation, Accepted, DeviationRecord, RecordsError,
    RejectReason,
};
pub use summary::{
    compliance_summary, render_summary_text, ComplianceSummary, DanglingReference, GuidelineStatus,
    GuidelineSummary, OverallClaim,
};

use crate::error::DbError;
use crate::guideline_db::{GuidelineDb, GuidelineId, RationaleSet};

/// The question to ask when confronted with a violation in `set`.
pub fn triage_prompt(set: RationaleSet) -> &'static str {
    use RationaleSet::*;
    match set {
        LTLM => "Do I really want to do that? (Hint: probably not.)",
        DEVM => "Did I make a typing mistake? Can I clarify my intentions?",
        CTIS => "Do I trust my build procedure? Do I have multiple inclusion guards in place?",
        RTIS => "Did I exclude or mitigate possible run-time errors?",
        DOCU => "Is this documentation available? (Hint: if the answer is \"no\", then there is a problem.)",
        ENMO => "Will we need to maintain this program? (Hint: probably yes; we are not prescient.)",
        HTDR => "Did I consider the intricacies of this language feature?",
        EAPI => "Do I really want to use this API? (Hint: probably not.)",
        BAPI => "Do I really want to use this API? (Hint: definitely not.)",
        PORT => "Is portability among the project objectives?",
        CTIL => "Can I get this right without compiler assistance?",
        RTIL => "Am I losing valuable information here?",
        TNTI => "Is this input tainted? If so, can it cause harm?",
        IRRC => "Why is this code here?",
        TYPM => "Can this result into a run-time type error? Am I willing to run the risk?",
        CSTR => "Can I make this code easier to understand?",
    }
}

const DYNAMIC_MEMORY: GuidelineId = GuidelineId::directive(4, 12);

const DYNAMIC_MEMORY_QUESTIONS: [&str; 8] = [
    "Do we have hard real-time constraints?",
    "Do we have tight limits on the available computing power or can we trade some computing \
     power in exchange for correctness guarantees?",
    "Is there a simple pattern in the memory sizes we need to dynamically allocate?",
    "Is our system long-running or can we assume it will be rebooted at least once in a given \
     number of hours or days?",
    "Is there a demonstrable upper bound to the amount of memory that has to be dynamically \
     allocated? Is this upper bound known at system-startup?",
    "(a) Can it be shown that available memory suffices even if allocated memory is never \
     released?",
    "(b1) Explicit release: how are dangling pointers, memory leaks and double frees ruled out, \
     and is the cost of smart pointers or checkers acceptable?",
    "(b2) Automatic release: is the less predictable execution time of garbage collection \
     acceptable for this system?",
];

/// Questions to work through before deciding between compliance and deviation.
///
/// D4.12 gets the dynamic-memory questionnaire; every other guideline gets the
/// prompts of its rationale sets, primary set first.
pub fn deviation_checklist(db: &GuidelineDb, id: GuidelineId) -> Result<Vec<String>, DbError> {
    let sets = db.sets_of(id)?;
    if id == DYNAMIC_MEMORY {
        return Ok(DYNAMIC_MEMORY_QUESTIONS
            .iter()
            .map(|q| q.to_string())
            .collect());
    }
    Ok(sets.iter().map(|s| triage_prompt(*s).to_string()).collect())
}
