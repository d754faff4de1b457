//! Immutable database of the 175 MISRA C guidelines and their classification
//! along kind, category, decidability, scope and rationale set.
//!
//! The bundled dataset is embedded from `data/guidelines.txt` and validated on
//! first use. Project-level recategorization produces a new layered value and
//! never touches the underlying records.

mod dataset;
mod id;
mod model;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

pub use id::{GuidelineId, GuidelineKind};
pub use model::{parse_set_list, Category, Decidability, Guideline, RationaleSet, Scope};
pub use validate::{
    expected_set_size, validate_dataset, ValidationReport, Violation, ViolationKind,
    EXPECTED_DUALS, EXPECTED_MEMBERSHIPS, EXPECTED_TOTAL,
};

use crate::error::DbError;

pub const BUNDLED_DATASET: &str = include_str!("../../data/guidelines.txt");

/// Target of a recategorization entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryOverride {
    Mandatory,
    Required,
    Advisory,
    Disapplied,
}

impl fmt::Display for CategoryOverride {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CategoryOverride::Mandatory => "mandatory",
            CategoryOverride::Required => "required",
            CategoryOverride::Advisory => "advisory",
            CategoryOverride::Disapplied => "disapplied",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecategorizationEntry {
    pub guideline: GuidelineId,
    pub category: CategoryOverride,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecategorizationPlan {
    pub entries: Vec<RecategorizationEntry>,
}

impl RecategorizationPlan {
    pub fn new(entries: impl IntoIterator<Item = (GuidelineId, CategoryOverride)>) -> Self {
        Self {
            entries: entries
                .into_iter()
                .map(|(guideline, category)| RecategorizationEntry {
                    guideline,
                    category,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuidelineDb {
    guidelines: Arc<BTreeMap<GuidelineId, Guideline>>,
    overrides: BTreeMap<GuidelineId, CategoryOverride>,
}

impl GuidelineDb {
    /// The embedded dataset. Panics if it fails to parse or validate.
    pub fn bundled() -> &'static GuidelineDb {
        static DB: OnceLock<GuidelineDb> = OnceLock::new();
        DB.get_or_init(|| {
            let db = GuidelineDb::parse(BUNDLED_DATASET).expect("bundled dataset must parse");
            let report = validate_dataset(&db);
            assert!(
                report.is_empty(),
                "bundled dataset is invalid: {:?}",
                report.violations
            );
            db
        })
    }

    pub fn parse(text: &str) -> Result<Self, DbError> {
        let records = dataset::parse_dataset(text)?;
        let mut guidelines = BTreeMap::new();
        for (line, g) in records {
            let id = g.id;
            if guidelines.insert(id, g).is_some() {
                return Err(DbError::Dataset {
                    line,
                    reason: format!("duplicate guideline {id}"),
                });
            }
        }
        Ok(Self {
            guidelines: Arc::new(guidelines),
            overrides: BTreeMap::new(),
        })
    }

    /// Builds a database from records; later duplicates replace earlier ones.
    pub fn from_guidelines(records: impl IntoIterator<Item = Guideline>) -> Self {
        let guidelines = records.into_iter().map(|g| (g.id, g)).collect();
        Self {
            guidelines: Arc::new(guidelines),
            overrides: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.guidelines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guidelines.is_empty()
    }

    pub fn contains(&self, id: GuidelineId) -> bool {
        self.guidelines.contains_key(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = GuidelineId> + '_ {
        self.guidelines.keys().copied()
    }

    /// Records as stored in the dataset, without recategorization applied.
    pub fn base_iter(&self) -> impl Iterator<Item = &Guideline> + '_ {
        self.guidelines.values()
    }

    pub fn base(&self, id: GuidelineId) -> Result<&Guideline, DbError> {
        self.guidelines
            .get(&id)
            .ok_or(DbError::UnknownGuideline(id))
    }

    /// Record with the effective category of this layer.
    pub fn lookup(&self, id: GuidelineId) -> Result<Guideline, DbError> {
        let base = self.base(id)?;
        let mut out = base.clone();
        match self.overrides.get(&id) {
            None => {}
            Some(CategoryOverride::Disapplied) => out.disapplied = true,
            Some(over) => {
                let category = match over {
                    CategoryOverride::Mandatory => Category::Mandatory,
                    CategoryOverride::Required => Category::Required,
                    _ => Category::Advisory,
                };
                if category != base.category {
                    out.recategorized_from = Some(base.category);
                    out.category = category;
                }
            }
        }
        Ok(out)
    }

    /// All records in id order, with effective categories.
    pub fn iter(&self) -> impl Iterator<Item = Guideline> + '_ {
        self.ids()
            .map(|id| self.lookup(id).expect("id comes from the map"))
    }

    pub fn effective_category(&self, id: GuidelineId) -> Result<Category, DbError> {
        self.lookup(id).map(|g| g.category)
    }

    pub fn is_disapplied(&self, id: GuidelineId) -> bool {
        self.overrides.get(&id) == Some(&CategoryOverride::Disapplied)
    }

    pub fn sets_of(&self, id: GuidelineId) -> Result<&[RationaleSet], DbError> {
        self.base(id).map(|g| g.rationale_sets.as_slice())
    }

    /// Members of a set, directives first, then rules, by series and index.
    pub fn guidelines_in(&self, set: RationaleSet) -> Vec<GuidelineId> {
        self.guidelines
            .values()
            .filter(|g| g.in_set(set))
            .map(|g| g.id)
            .collect()
    }

    pub fn recategorizations(&self) -> &BTreeMap<GuidelineId, CategoryOverride> {
        &self.overrides
    }

    /// Returns a new layer with the plan applied. The whole plan is rejected if
    /// any entry would weaken a mandatory or required guideline.
    pub fn apply_recategorization(
        &self,
        plan: &RecategorizationPlan,
    ) -> Result<GuidelineDb, DbError> {
        let mut next = self.clone();
        for entry in &plan.entries {
            let current = next.lookup(entry.guideline)?;
            let from = current.category;
            let allowed = match (from.for_deviation(), entry.category) {
                (Category::Mandatory, CategoryOverride::Mandatory) => true,
                (Category::Mandatory, _) => false,
                (Category::Required, CategoryOverride::Mandatory | CategoryOverride::Required) => {
                    true
                }
                (Category::Required, _) => false,
                (Category::Advisory, _) => true,
                (Category::Unknown, _) => unreachable!("for_deviation maps Unknown to Required"),
            };
            if !allowed {
                return Err(DbError::IllegalRecategorization {
                    id: entry.guideline,
                    from,
                    to: entry.category,
                });
            }
            let base = next.base(entry.guideline)?.category;
            let unchanged = matches!(
                (base, entry.category),
                (Category::Mandatory, CategoryOverride::Mandatory)
                    | (Category::Required, CategoryOverride::Required)
                    | (Category::Advisory, CategoryOverride::Advisory)
            );
            if unchanged {
                next.overrides.remove(&entry.guideline);
            } else {
                next.overrides.insert(entry.guideline, entry.category);
            }
        }
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn db() -> &'static GuidelineDb {
        GuidelineDb::bundled()
    }

    fn id(s: &str) -> GuidelineId {
        s.parse().unwrap()
    }

    #[test]
    fn bundled_dataset_is_valid() {
        let report = validate_dataset(db());
        assert!(report.is_empty(), "{:?}", report.violations);
        assert_eq!(db().len(), 175);
    }

    #[test]
    fn lookup_examples() {
        let r11 = db().lookup(id("R1.1")).unwrap();
        assert_eq!(r11.kind, GuidelineKind::Rule);
        assert_eq!(r11.rationale_sets, vec![RationaleSet::LTLM]);
        assert_eq!(
            db().lookup(id("D4.14")).unwrap().rationale_sets,
            vec![RationaleSet::TNTI]
        );
        assert_eq!(
            db().lookup(id("R99.9")),
            Err(DbError::UnknownGuideline(id("R99.9")))
        );
        assert_eq!(
            db().effective_category(id("R9.1")).unwrap(),
            Category::Mandatory
        );
        assert_eq!(
            db().effective_category(id("D4.6")).unwrap(),
            Category::Advisory
        );
    }

    #[test]
    fn dual_members_keep_primary_set_first() {
        use RationaleSet::*;
        assert_eq!(db().sets_of(id("R6.1")).unwrap(), &[PORT, LTLM]);
        assert_eq!(db().sets_of(id("R8.6")).unwrap(), &[IRRC, LTLM]);
        assert_eq!(db().sets_of(id("R22.5")).unwrap(), &[HTDR, PORT]);
        assert!(db().sets_of(id("R99.9")).is_err());
    }

    #[test]
    fn set_member_lists() {
        let render = |set| -> Vec<String> {
            db().guidelines_in(set)
                .iter()
                .map(ToString::to_string)
                .collect()
        };
        assert_eq!(render(RationaleSet::EAPI), ["R1.4"]);
        assert_eq!(render(RationaleSet::RTIS), ["D4.1", "R22.1"]);
        assert_eq!(render(RationaleSet::CTIS), ["D2.1", "D4.10"]);
        assert_eq!(
            render(RationaleSet::IRRC),
            ["R2.1", "R2.2", "R2.3", "R2.4", "R2.5", "R2.6", "R2.7", "R8.6"]
        );
    }

    #[test]
    fn triple_membership_is_reported() {
        let mut records: Vec<Guideline> = db().base_iter().cloned().collect();
        let r61 = records.iter_mut().find(|g| g.id == id("R6.1")).unwrap();
        r61.rationale_sets.push(RationaleSet::CSTR);
        let report = validate_dataset(&GuidelineDb::from_guidelines(records));
        assert!(report.has(ViolationKind::DualMembershipCap));
        let cap = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::DualMembershipCap)
            .unwrap();
        assert_eq!(cap.ids, vec![id("R6.1")]);
    }

    #[test]
    fn missing_guideline_breaks_total_and_cardinality() {
        let records = db().base_iter().filter(|g| g.id != id("D4.14")).cloned();
        let report = validate_dataset(&GuidelineDb::from_guidelines(records));
        // 174 guidelines and TNTI empty; the membership total drops to 177.
        let messages: Vec<String> = report
            .violations
            .iter()
            .map(|v| v.message.clone())
            .collect();
        assert!(
            messages.contains(&"total 174 ≠ 175".to_string()),
            "{messages:?}"
        );
        assert!(
            messages.contains(&"TNTI cardinality 0 ≠ 1".to_string()),
            "{messages:?}"
        );
        assert!(
            messages.contains(&"membership total 177 ≠ 178".to_string()),
            "{messages:?}"
        );
        assert_eq!(report.violations.len(), 3);
    }

    #[test]
    fn rule_with_na_decidability_is_reported() {
        let mut records: Vec<Guideline> = db().base_iter().cloned().collect();
        records[40].decidability = Decidability::NotApplicable;
        let bad = records[40].id;
        let report = validate_dataset(&GuidelineDb::from_guidelines(records));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].ids, vec![bad]);
    }

    #[test]
    fn duplicate_records_rejected_at_parse() {
        let err = GuidelineDb::parse(
            "R1.1 required decidable stu LTLM\nR1.1 required decidable stu LTLM\n",
        );
        assert!(matches!(err, Err(DbError::Dataset { .. })));
    }

    #[test]
    fn recategorization_rules() {
        let weaken = RecategorizationPlan::new([(id("R9.1"), CategoryOverride::Required)]);
        assert!(matches!(
            db().apply_recategorization(&weaken),
            Err(DbError::IllegalRecategorization {
                from: Category::Mandatory,
                ..
            })
        ));

        let strengthen = RecategorizationPlan::new([(id("D4.6"), CategoryOverride::Required)]);
        let layered = db().apply_recategorization(&strengthen).unwrap();
        let d46 = layered.lookup(id("D4.6")).unwrap();
        assert_eq!(d46.category, Category::Required);
        assert_eq!(d46.recategorized_from, Some(Category::Advisory));
        // Base layer untouched.
        assert_eq!(
            db().effective_category(id("D4.6")).unwrap(),
            Category::Advisory
        );

        assert_eq!(
            &db()
                .apply_recategorization(&RecategorizationPlan::default())
                .unwrap(),
            db()
        );

        // R1.1 is required: may become mandatory but not advisory or disapplied.
        for (to, ok) in [
            (CategoryOverride::Mandatory, true),
            (CategoryOverride::Required, true),
            (CategoryOverride::Advisory, false),
            (CategoryOverride::Disapplied, false),
        ] {
            let plan = RecategorizationPlan::new([(id("R1.1"), to)]);
            assert_eq!(db().apply_recategorization(&plan).is_ok(), ok, "{to}");
        }

        let unknown = RecategorizationPlan::new([(id("R99.9"), CategoryOverride::Mandatory)]);
        assert_eq!(
            db().apply_recategorization(&unknown),
            Err(DbError::UnknownGuideline(id("R99.9")))
        );
    }

    #[test]
    fn disapplied_guideline_remains_queryable() {
        let plan = RecategorizationPlan::new([(id("R2.7"), CategoryOverride::Disapplied)]);
        let layered = db().apply_recategorization(&plan).unwrap();
        assert!(layered.is_disapplied(id("R2.7")));
        let g = layered.lookup(id("R2.7")).unwrap();
        assert!(g.disapplied);
        assert_eq!(g.category, Category::Advisory);
        // Once recategorized to required, the plan can no longer disapply it.
        let plan = RecategorizationPlan::new([
            (id("R2.7"), CategoryOverride::Required),
            (id("R2.7"), CategoryOverride::Disapplied),
        ]);
        assert!(db().apply_recategorization(&plan).is_err());
    }

    #[test]
    fn membership_is_consistent_both_ways() {
        for g in db().base_iter() {
            for set in RationaleSet::ALL {
                let listed = db().guidelines_in(set).contains(&g.id);
                assert_eq!(
                    listed,
                    db().sets_of(g.id).unwrap().contains(&set),
                    "{} {set}",
                    g.id
                );
            }
        }
    }

    fn any_override() -> impl Strategy<Value = CategoryOverride> {
        prop_oneof![
            Just(CategoryOverride::Mandatory),
            Just(CategoryOverride::Required),
            Just(CategoryOverride::Advisory),
            Just(CategoryOverride::Disapplied),
        ]
    }

    proptest! {
        #[test]
        fn recategorization_preserves_other_axes(
            picks in proptest::collection::vec((0usize..175, any_override()), 0..12)
        ) {
            let ids: Vec<GuidelineId> = db().ids().collect();
            let plan = RecategorizationPlan::new(picks.iter().map(|(i, c)| (ids[*i], *c)));
            if let Ok(layered) = db().apply_recategorization(&plan) {
                for id in &ids {
                    let before = db().lookup(*id).unwrap();
                    let after = layered.lookup(*id).unwrap();
                    prop_assert_eq!(&before.rationale_sets, &after.rationale_sets);
                    prop_assert_eq!(before.decidability, after.decidability);
                    prop_assert_eq!(before.scope, after.scope);
                    // Never weakened below the dataset category.
                    if before.category == Category::Mandatory {
                        prop_assert_eq!(after.category, Category::Mandatory);
                        prop_assert!(!after.disapplied);
                    }
                    if before.category == Category::Required {
                        prop_assert!(matches!(after.category, Category::Required | Category::Mandatory));
                        prop_assert!(!after.disapplied);
                    }
                }
            }
        }
    }
}
