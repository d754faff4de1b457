use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Decidability, GuidelineDb, GuidelineId, RationaleSet};

pub const EXPECTED_TOTAL: usize = 175;
/// 175 guidelines plus the three dual members.
pub const EXPECTED_MEMBERSHIPS: usize = 178;

pub const EXPECTED_DUALS: [GuidelineId; 3] = [
    GuidelineId::rule(6, 1),
    GuidelineId::rule(8, 6),
    GuidelineId::rule(22, 5),
];

pub fn expected_set_size(set: RationaleSet) -> usize {
    use RationaleSet::*;
    match set {
        LTLM => 41,
        DEVM => 38,
        CTIS => 2,
        RTIS => 2,
        DOCU => 3,
        ENMO => 4,
        HTDR => 28,
        EAPI => 1,
        BAPI => 2,
        PORT => 4,
        CTIL => 14,
        RTIL => 6,
        TNTI => 1,
        IRRC => 8,
        TYPM => 12,
        CSTR => 12,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    TotalCount,
    EmptySets,
    DualMembershipCap,
    DualMembershipSet,
    KindDecidability,
    SetCardinality,
    MembershipTotal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    pub ids: Vec<GuidelineId>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        if !self.ids.is_empty() {
            let ids: Vec<String> = self.ids.iter().map(ToString::to_string).collect();
            write!(f, " [{}]", ids.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Checks every structural invariant of the database and lists what fails.
pub fn validate_dataset(db: &GuidelineDb) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |kind, message: String, ids: Vec<GuidelineId>| {
        violations.push(Violation { kind, message, ids })
    };

    let total = db.len();
    if total != EXPECTED_TOTAL {
        push(
            ViolationKind::TotalCount,
            format!("total {total} ≠ {EXPECTED_TOTAL}"),
            vec![],
        );
    }

    let empty: Vec<_> = db
        .base_iter()
        .filter(|g| g.rationale_sets.is_empty())
        .map(|g| g.id)
        .collect();
    if !empty.is_empty() {
        push(
            ViolationKind::EmptySets,
            "guideline without rationale set".into(),
            empty,
        );
    }

    let over: Vec<_> = db
        .base_iter()
        .filter(|g| g.rationale_sets.len() > 2)
        .map(|g| g.id)
        .collect();
    if !over.is_empty() {
        push(
            ViolationKind::DualMembershipCap,
            "dual-membership cap".into(),
            over,
        );
    }

    let duals: BTreeSet<_> = db
        .base_iter()
        .filter(|g| g.rationale_sets.len() == 2)
        .map(|g| g.id)
        .collect();
    let expected: BTreeSet<_> = EXPECTED_DUALS.into_iter().collect();
    if duals != expected {
        let diff = duals.symmetric_difference(&expected).copied().collect();
        push(
            ViolationKind::DualMembershipSet,
            "dual-membership set ≠ {R6.1, R8.6, R22.5}".into(),
            diff,
        );
    }

    let mismatched: Vec<_> = db
        .base_iter()
        .filter(|g| (g.decidability == Decidability::NotApplicable) != g.id.is_directive())
        .map(|g| g.id)
        .collect();
    if !mismatched.is_empty() {
        push(
            ViolationKind::KindDecidability,
            "decidability NA must hold exactly for directives".into(),
            mismatched,
        );
    }

    let mut memberships = 0;
    for set in RationaleSet::ALL {
        let members = db.guidelines_in(set);
        memberships += members.len();
        let expected = expected_set_size(set);
        if members.len() != expected {
            push(
                ViolationKind::SetCardinality,
                format!("{set} cardinality {} ≠ {expected}", members.len()),
                vec![],
            );
        }
    }
    if memberships != EXPECTED_MEMBERSHIPS {
        push(
            ViolationKind::MembershipTotal,
            format!("membership total {memberships} ≠ {EXPECTED_MEMBERSHIPS}"),
            vec![],
        );
    }

    ValidationReport { violations }
}
