//! Rationale-based triage of MISRA C findings.
//!
//! * [`guideline_db`]: the classified guideline database and recategorization.
//! * [`findings`]: JSON Lines findings ingest and per-set classification.
//! * [`triage`]: triage prompts, deviation checklists, deviation validation and
//!   the compliance summary.
//! * [`planner`]: remediation plans and what-if subset analysis.
//! * [`checkers`]: a lossless C lexer and two reference checkers.
//! * [`report`]: the combined, deterministic project report.

pub mod checkers;
pub mod error;
pub mod findings;
pub mod guideline_db;
pub mod planner;
pub mod report;
pub mod triage;

pub use error::DbError;
pub use guideline_db::{
    Category, CategoryOverride, Guideline, GuidelineDb, GuidelineId, GuidelineKind, RationaleSet,
    RecategorizationPlan,
};
