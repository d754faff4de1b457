//! Remediation plans and what-if subset adoption.
//!
//! A plan is an ordered list of phases, each naming the rationale sets it
//! covers. Every finding goes to the first phase that shares a set with its
//! guideline, so dual-member findings land in the earliest matching phase and
//! the phases partition the input. The last phase always collects the sets no
//! earlier phase named.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::findings::Finding;
use crate::guideline_db::{GuidelineDb, RationaleSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objectives {
    pub portability: bool,
    pub inexperienced_team: bool,
    pub maintainability_reuse: bool,
}

impl FromStr for Objectives {
    type Err = String;

    /// Comma separated: `portability`, `inexperienced_team`, `maintainability_reuse`
    /// (dashes and the short forms `inexperienced` and `maintainability` work too).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Objectives::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().replace('-', "_").as_str() {
                "portability" => out.portability = true,
                "inexperienced_team" | "inexperienced" => out.inexperienced_team = true,
                "maintainability_reuse" | "maintainability" | "reuse" => {
                    out.maintainability_reuse = true
                }
                _ => return Err(format!("unknown objective `{part}`")),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Projects adopting a subset without a compliance requirement.
    Greenfield,
    /// Projects facing a compliance backlog late in development.
    Late,
    Custom,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greenfield" => Ok(Strategy::Greenfield),
            "late" => Ok(Strategy::Late),
            _ => Err(format!(
                "unknown strategy `{s}` (expected greenfield or late)"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Greenfield => "greenfield",
            Strategy::Late => "late",
            Strategy::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub label: String,
    pub sets: Vec<RationaleSet>,
    pub findings: Vec<Finding>,
    pub distinct: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Plan {
    pub strategy: Strategy,
    pub phases: Vec<Phase>,
    /// Findings on disapplied guidelines, kept out of every phase.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<Finding>,
}

pub const REMAINDER_LABEL: &str = "remainder";

/// Phase order for the greenfield strategy: LTLM, DEVM, then PORT, HTDR and
/// ENMO when their objective holds, then the remainder.
pub fn greenfield_phases(objectives: Objectives) -> Vec<Vec<RationaleSet>> {
    use RationaleSet::*;
    let mut phases = vec![vec![LTLM], vec![DEVM]];
    if objectives.portability {
        phases.push(vec![PORT]);
    }
    if objectives.inexperienced_team {
        phases.push(vec![HTDR]);
    }
    if objectives.maintainability_reuse {
        phases.push(vec![ENMO]);
    }
    phases
}

/// Phase order for late compliance: DOCU, LTLM, TYPM, DEVM with HTDR, remainder.
pub fn late_phases() -> Vec<Vec<RationaleSet>> {
    use RationaleSet::*;
    vec![vec![DOCU], vec![LTLM], vec![TYPM], vec![DEVM, HTDR]]
}

pub fn plan_greenfield(findings: &[Finding], db: &GuidelineDb, objectives: Objectives) -> Plan {
    plan_with_phases(
        Strategy::Greenfield,
        findings,
        db,
        &greenfield_phases(objectives),
    )
}

pub fn plan_late(findings: &[Finding], db: &GuidelineDb) -> Plan {
    plan_with_phases(Strategy::Late, findings, db, &late_phases())
}

/// Builds a plan from explicit leading phases followed by the remainder.
/// Sets already named by an earlier phase are ignored in later ones.
pub fn plan_with_phases(
    strategy: Strategy,
    findings: &[Finding],
    db: &GuidelineDb,
    leading: &[Vec<RationaleSet>],
) -> Plan {
    let mut phases: Vec<Phase> = Vec::with_capacity(leading.len() + 1);
    let mut owner: BTreeMap<RationaleSet, usize> = BTreeMap::new();
    for sets in leading {
        let fresh: Vec<RationaleSet> = sets
            .iter()
            .copied()
            .filter(|s| !owner.contains_key(s))
            .collect();
        for s in &fresh {
            owner.insert(*s, phases.len());
        }
        let label = fresh.iter().map(|s| s.code()).collect::<Vec<_>>().join("+");
        phases.push(Phase {
            label,
            sets: fresh,
            findings: Vec::new(),
            distinct: 0,
        });
    }
    let remainder_index = phases.len();
    let remainder: Vec<RationaleSet> = RationaleSet::ALL
        .into_iter()
        .filter(|s| !owner.contains_key(s))
        .collect();
    phases.push(Phase {
        label: REMAINDER_LABEL.to_string(),
        sets: remainder,
        findings: Vec::new(),
        distinct: 0,
    });

    let mut excluded = Vec::new();
    for finding in findings {
        if db.is_disapplied(finding.guideline) {
            excluded.push(finding.clone());
            continue;
        }
        let target = db
            .sets_of(finding.guideline)
            .map(|sets| sets.iter().filter_map(|s| owner.get(s).copied()).min())
            .ok()
            .flatten()
            .unwrap_or(remainder_index);
        phases[target].findings.push(finding.clone());
    }
    for phase in &mut phases {
        phase.distinct = phase.findings.len();
    }
    Plan {
        strategy,
        phases,
        excluded,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhatIfReport {
    pub selected: Vec<RationaleSet>,
    pub in_scope: Vec<Finding>,
    pub out_of_scope: Vec<Finding>,
    /// For each selected set, the number of in-scope findings in that set.
    pub per_set: BTreeMap<RationaleSet, usize>,
    pub in_scope_count: usize,
    pub out_of_scope_count: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<Finding>,
}

/// Splits findings by whether their guideline belongs to any selected set.
pub fn whatif_subset(
    findings: &[Finding],
    db: &GuidelineDb,
    selected: &[RationaleSet],
) -> WhatIfReport {
    let mut selected: Vec<RationaleSet> = selected.to_vec();
    selected.sort();
    selected.dedup();
    let mut per_set: BTreeMap<RationaleSet, usize> = selected.iter().map(|s| (*s, 0)).collect();
    let mut in_scope = Vec::new();
    let mut out_of_scope = Vec::new();
    let mut excluded = Vec::new();
    for finding in findings {
        if db.is_disapplied(finding.guideline) {
            excluded.push(finding.clone());
            continue;
        }
        let sets = db.sets_of(finding.guideline).unwrap_or(&[]);
        let mut hit = false;
        for s in sets {
            if let Some(count) = per_set.get_mut(s) {
                *count += 1;
                hit = true;
            }
        }
        if hit {
            in_scope.push(finding.clone());
        } else {
            out_of_scope.push(finding.clone());
        }
    }
    WhatIfReport {
        in_scope_count: in_scope.len(),
        out_of_scope_count: out_of_scope.len(),
        selected,
        in_scope,
        out_of_scope,
        per_set,
        excluded,
    }
}

/// Fixed-width text rendering of a plan.
pub fn render_plan_text(plan: &Plan) -> String {
    let mut out = format!("strategy: {}\n", plan.strategy);
    for (i, phase) in plan.phases.iter().enumerate() {
        let sets: Vec<&str> = phase.sets.iter().map(|s| s.code()).collect();
        out.push_str(&format!(
            "phase {} {:<10} {:>6} findings  [{}]\n",
            i + 1,
            phase.label,
            phase.distinct,
            sets.join(", ")
        ));
        for f in &phase.findings {
            let column = f.column.map(|c| format!(":{c}")).unwrap_or_default();
            out.push_str(&format!(
                "    {:<7} {}:{}{} {}\n",
                f.guideline.to_string(),
                f.file,
                f.line,
                column,
                f.message
            ));
        }
    }
    if !plan.excluded.is_empty() {
        out.push_str(&format!("excluded (disapplied): {}\n", plan.excluded.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::guideline_db::{CategoryOverride, RecategorizationPlan};
    use proptest::prelude::{prop, prop_assert_eq, proptest, Strategy as _};

    fn db() -> &'static GuidelineDb {
        GuidelineDb::bundled()
    }

    fn finding(guideline: &str) -> Finding {
        Finding {
            tool: "t".into(),
            guideline: guideline.parse().unwrap(),
            file: "a.c".into(),
            line: 1,
            column: None,
            message: guideline.into(),
        }
    }

    fn guidelines(phase: &Phase) -> Vec<String> {
        phase
            .findings
            .iter()
            .map(|f| f.guideline.to_string())
            .collect()
    }

    #[test]
    fn greenfield_without_objectives() {
        let plan = plan_greenfield(
            &[finding("R1.1"), finding("R12.5")],
            db(),
            Objectives::default(),
        );
        let labels: Vec<_> = plan.phases.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["LTLM", "DEVM", "remainder"]);
        assert_eq!(guidelines(&plan.phases[0]), ["R1.1"]);
        assert_eq!(guidelines(&plan.phases[1]), ["R12.5"]);
        assert!(plan.phases[2].findings.is_empty());
        assert_eq!(plan.phases[2].sets.len(), 14);
    }

    #[test]
    fn greenfield_portability_phase() {
        let objectives: Objectives = "portability".parse().unwrap();
        let plan = plan_greenfield(&[finding("D4.6")], db(), objectives);
        assert_eq!(plan.phases[2].label, "PORT");
        assert_eq!(guidelines(&plan.phases[2]), ["D4.6"]);
    }

    #[test]
    fn greenfield_all_objectives_order() {
        let objectives: Objectives = "maintainability,inexperienced-team,portability"
            .parse()
            .unwrap();
        let plan = plan_greenfield(&[], db(), objectives);
        let labels: Vec<_> = plan.phases.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(
            labels,
            ["LTLM", "DEVM", "PORT", "HTDR", "ENMO", "remainder"]
        );
        assert!(plan.phases.iter().all(|p| p.findings.is_empty()));
        assert!("speed".parse::<Objectives>().is_err());
    }

    #[test]
    fn late_order() {
        let plan = plan_late(&[finding("D1.1"), finding("R1.1"), finding("R10.1")], db());
        let labels: Vec<_> = plan.phases.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["DOCU", "LTLM", "TYPM", "DEVM+HTDR", "remainder"]);
        assert_eq!(guidelines(&plan.phases[0]), ["D1.1"]);
        assert_eq!(guidelines(&plan.phases[1]), ["R1.1"]);
        assert_eq!(guidelines(&plan.phases[2]), ["R10.1"]);
    }

    #[test]
    fn late_earliest_phase_for_duals() {
        // R8.6 is IRRC+LTLM: LTLM phase comes before the remainder.
        let plan = plan_late(&[finding("R8.6"), finding("R16.1")], db());
        assert_eq!(guidelines(&plan.phases[1]), ["R8.6"]);
        assert_eq!(guidelines(&plan.phases[4]), ["R16.1"]);
    }

    #[test]
    fn disapplied_findings_are_excluded() {
        let layered = db()
            .apply_recategorization(&RecategorizationPlan::new([(
                "R2.7".parse().unwrap(),
                CategoryOverride::Disapplied,
            )]))
            .unwrap();
        let plan = plan_late(&[finding("R2.7"), finding("R2.6")], &layered);
        assert_eq!(plan.excluded.len(), 1);
        assert_eq!(plan.phases.iter().map(|p| p.distinct).sum::<usize>(), 1);
    }

    #[test]
    fn custom_phases_skip_repeated_sets() {
        use RationaleSet::*;
        let plan = plan_with_phases(
            Strategy::Custom,
            &[finding("R6.1")],
            db(),
            &[vec![PORT], vec![LTLM, PORT]],
        );
        assert_eq!(plan.phases[1].sets, [LTLM]);
        assert_eq!(guidelines(&plan.phases[0]), ["R6.1"]);
    }

    #[test]
    fn whatif_examples() {
        let fs = [finding("R6.1"), finding("R16.1")];
        let all = whatif_subset(&fs, db(), &RationaleSet::ALL);
        assert_eq!(all.in_scope, fs);
        let none = whatif_subset(&fs, db(), &[]);
        assert!(none.in_scope.is_empty());
        assert_eq!(none.out_of_scope_count, 2);
        let ltlm = whatif_subset(&fs, db(), &[RationaleSet::LTLM]);
        assert_eq!(ltlm.in_scope, [finding("R6.1")]);
        assert_eq!(ltlm.per_set[&RationaleSet::LTLM], 1);
    }

    #[test]
    fn plan_text_lists_phases() {
        let text = render_plan_text(&plan_late(&[finding("R8.6")], db()));
        assert!(text.starts_with("strategy: late\n"));
        assert!(text.contains("phase 2 LTLM"));
        assert!(text.contains("R8.6"));
    }

    fn arb_findings() -> impl proptest::strategy::Strategy<Value = Vec<Finding>> {
        let ids: Vec<String> = db().ids().map(|i| i.to_string()).collect();
        prop::collection::vec(prop::sample::select(ids).prop_map(|g| finding(&g)), 0..50)
    }

    fn arb_sets() -> impl proptest::strategy::Strategy<Value = Vec<RationaleSet>> {
        prop::sample::subsequence(RationaleSet::ALL.to_vec(), 0..=16)
    }

    proptest! {
        #[test]
        fn plans_partition_findings(fs in arb_findings(), p: bool, i: bool, m: bool) {
            let objectives = Objectives { portability: p, inexperienced_team: i, maintainability_reuse: m };
            for plan in [plan_greenfield(&fs, db(), objectives), plan_late(&fs, db())] {
                let total: usize = plan.phases.iter().map(|ph| ph.findings.len()).sum();
                prop_assert_eq!(total, fs.len());
                // Within-phase order follows input order.
                for phase in &plan.phases {
                    let expected: Vec<_> = fs.iter().filter(|f| phase.findings.contains(f)).cloned().collect();
                    prop_assert_eq!(&phase.findings, &expected);
                }
            }
            let expected_phases = 3 + p as usize + i as usize + m as usize;
            prop_assert_eq!(plan_greenfield(&fs, db(), objectives).phases.len(), expected_phases);
        }

        #[test]
        fn whatif_distributes_over_union(fs in arb_findings(), a in arb_sets(), b in arb_sets()) {
            let union: Vec<_> = a.iter().chain(&b).copied().collect();
            let ra = whatif_subset(&fs, db(), &a);
            let rb = whatif_subset(&fs, db(), &b);
            let ru = whatif_subset(&fs, db(), &union);
            let expected: Vec<_> = fs
                .iter()
                .enumerate()
                .filter(|(_, f)| ra.in_scope.contains(f) || rb.in_scope.contains(f))
                .map(|(_, f)| f.clone())
                .collect();
            prop_assert_eq!(ru.in_scope, expected);
        }
    }
}
