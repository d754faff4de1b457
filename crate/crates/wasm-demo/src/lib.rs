//! Browser bindings for three operations: what-if subset adoption, remediation
//! plans and the reference checkers. Each takes text and returns JSON; the
//! `*_json` functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use misra_triage::checkers::{check_all, TranslationUnitView};
use misra_triage::findings::{parse_findings, Finding};
use misra_triage::guideline_db::{parse_set_list, GuidelineDb};
use misra_triage::planner::{
    plan_greenfield, plan_late, whatif_subset, Objectives, Plan, Strategy, WhatIfReport,
};

#[derive(Serialize)]
struct WhatIfResponse {
    report: WhatIfReport,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct PlanResponse {
    plan: Plan,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct LexProblem {
    kind: String,
    line: u32,
    column: u32,
}

#[derive(Serialize)]
struct CheckResponse {
    findings: Vec<Finding>,
    lex_errors: Vec<LexProblem>,
    tokens: usize,
    directives: usize,
}

fn ingest(findings_jsonl: &str) -> (Vec<Finding>, Vec<String>) {
    let outcome = parse_findings(findings_jsonl, GuidelineDb::bundled());
    (
        outcome.findings,
        outcome
            .diagnostics
            .iter()
            .map(ToString::to_string)
            .collect(),
    )
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("response serializes")
}

pub fn whatif_json(findings_jsonl: &str, sets: &str) -> Result<String, String> {
    let selected = parse_set_list(sets).map_err(|e| e.to_string())?;
    let (findings, diagnostics) = ingest(findings_jsonl);
    let report = whatif_subset(&findings, GuidelineDb::bundled(), &selected);
    Ok(to_json(&WhatIfResponse {
        report,
        diagnostics,
    }))
}

pub fn plan_json(findings_jsonl: &str, strategy: &str, objectives: &str) -> Result<String, String> {
    let strategy: Strategy = strategy.parse()?;
    let objectives: Objectives = objectives.parse()?;
    let (findings, diagnostics) = ingest(findings_jsonl);
    let db = GuidelineDb::bundled();
    let plan = match strategy {
        Strategy::Late => plan_late(&findings, db),
        _ => plan_greenfield(&findings, db, objectives),
    };
    Ok(to_json(&PlanResponse { plan, diagnostics }))
}

pub fn check_json(path: &str, source: &str) -> String {
    let tu = TranslationUnitView::from_source(path, source);
    to_json(&CheckResponse {
        findings: check_all(&tu),
        lex_errors: tu
            .errors
            .iter()
            .map(|e| LexProblem {
                kind: format!("{:?}", e.kind),
                line: e.line,
                column: e.column,
            })
            .collect(),
        tokens: tu.tokens.len(),
        directives: tu.pp_directives.len(),
    })
}

/// What-if report for JSON Lines findings and a comma-separated set list.
#[wasm_bindgen]
pub fn whatif(findings_jsonl: &str, sets: &str) -> Result<String, JsError> {
    whatif_json(findings_jsonl, sets).map_err(|e| JsError::new(&e))
}

/// Plan for `greenfield` or `late`; objectives are comma-separated.
#[wasm_bindgen]
pub fn plan(findings_jsonl: &str, strategy: &str, objectives: &str) -> Result<String, JsError> {
    plan_json(findings_jsonl, strategy, objectives).map_err(|e| JsError::new(&e))
}

/// Reference checkers over one source text; `path` decides header handling.
#[wasm_bindgen]
pub fn check(path: &str, source: &str) -> String {
    check_json(path, source)
}
