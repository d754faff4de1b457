use thiserror::Error;

use crate::guideline_db::{Category, CategoryOverride, GuidelineId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbError {
    #[error("malformed guideline id `{0}`")]
    MalformedId(String),
    #[error("unknown guideline {0}")]
    UnknownGuideline(GuidelineId),
    #[error("unknown rationale set `{0}`")]
    UnknownSet(String),
    #[error("illegal recategorization of {id}: {from} guideline cannot become {to}")]
    IllegalRecategorization {
        id: GuidelineId,
        from: Category,
        to: CategoryOverride,
    },
    #[error("dataset line {line}: {reason}")]
    Dataset { line: usize, reason: String },
}
