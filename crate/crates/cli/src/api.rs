//! JSON API over a loaded project. Read endpoints return exactly what the
//! library computes; the only mutation is appending a decision, serialized by
//! a single lock around check-and-append.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;
use serde_json::json;
use tokio::sync::Mutex;

use misra_triage::findings::{classify_by_set, finding_refs, Finding, FindingRef};
use misra_triage::guideline_db::{
    parse_set_list, Guideline, GuidelineDb, GuidelineId, RationaleSet,
};
use misra_triage::planner::{plan_greenfield, plan_late, whatif_subset, Objectives, Strategy};
use misra_triage::triage::{
    check_decision, compliance_summary, deviation_checklist, triage_prompt, ComplianceSummary,
    DanglingReference, Decision, DecisionError, DecisionLog, DeviationRecord,
};

use crate::config::Project;

pub struct AppState {
    db: GuidelineDb,
    findings: Vec<Finding>,
    refs: Vec<FindingRef>,
    records: Vec<DeviationRecord>,
    objectives: Objectives,
    subset: Option<Vec<RationaleSet>>,
    decisions: Mutex<DecisionLog>,
}

impl AppState {
    pub fn new(project: Project) -> Self {
        let refs = finding_refs(&project.findings);
        Self {
            db: project.db,
            findings: project.findings,
            refs,
            records: project.records,
            objectives: project.config.objectives,
            subset: project.config.subset,
            decisions: Mutex::new(project.decisions),
        }
    }
}

pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.into(),
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NotFound", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": self.code, "message": self.message })),
        )
            .into_response()
    }
}

impl From<DanglingReference> for ApiError {
    fn from(e: DanglingReference) -> Self {
        ApiError::new(StatusCode::CONFLICT, "DanglingReference", e.to_string())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/db", get(get_db))
        .route("/api/summary", get(get_summary))
        .route("/api/findings", get(get_findings))
        .route("/api/plan", get(get_plan))
        .route("/api/whatif", get(get_whatif))
        .route("/api/prompts/{set}", get(get_prompt))
        .route("/api/checklist/{guideline}", get(get_checklist))
        .route("/api/decisions", get(get_decisions).post(post_decision))
        .with_state(state)
}

#[derive(Serialize)]
pub struct SetEntry {
    pub code: RationaleSet,
    pub long_name: &'static str,
    pub prompt: &'static str,
    pub guidelines: Vec<GuidelineId>,
}

#[derive(Serialize)]
pub struct DbView {
    pub guidelines: Vec<Guideline>,
    pub sets: Vec<SetEntry>,
}

pub fn db_view(db: &GuidelineDb) -> DbView {
    DbView {
        guidelines: db.iter().collect(),
        sets: RationaleSet::ALL
            .into_iter()
            .map(|s| SetEntry {
                code: s,
                long_name: s.long_name(),
                prompt: triage_prompt(s),
                guidelines: db.guidelines_in(s),
            })
            .collect(),
    }
}

async fn get_db(State(state): State<Arc<AppState>>) -> Json<DbView> {
    Json(db_view(&state.db))
}

#[derive(Serialize)]
pub struct SummaryView {
    pub findings: usize,
    pub per_set: BTreeMap<RationaleSet, usize>,
    pub summary: ComplianceSummary,
}

async fn get_summary(State(state): State<Arc<AppState>>) -> ApiResult<SummaryView> {
    let decisions = state.decisions.lock().await;
    let summary = compliance_summary(
        &state.findings,
        decisions.entries(),
        &state.records,
        &state.db,
    )?;
    Ok(Json(SummaryView {
        findings: state.findings.len(),
        per_set: classify_by_set(&state.findings, &state.db).counts(),
        summary,
    }))
}

#[derive(Serialize)]
pub struct FindingEntry {
    #[serde(rename = "ref")]
    pub reference: FindingRef,
    #[serde(flatten)]
    pub finding: Finding,
    pub sets: Vec<RationaleSet>,
}

async fn get_findings(
    State(state): State<Arc<AppState>>,
    Query(q): Query<BTreeMap<String, String>>,
) -> ApiResult<Vec<FindingEntry>> {
    let filter = match q.get("set") {
        Some(name) => Some(
            name.parse::<RationaleSet>()
                .map_err(|e| ApiError::not_found(e.to_string()))?,
        ),
        None => None,
    };
    let entries = state
        .refs
        .iter()
        .zip(&state.findings)
        .filter_map(|(r, f)| {
            let sets = state.db.sets_of(f.guideline).ok()?.to_vec();
            if filter.is_some_and(|s| !sets.contains(&s)) {
                return None;
            }
            Some(FindingEntry {
                reference: r.clone(),
                finding: f.clone(),
                sets,
            })
        })
        .collect();
    Ok(Json(entries))
}

async fn get_plan(
    State(state): State<Arc<AppState>>,
    Query(q): Query<BTreeMap<String, String>>,
) -> Result<Response, ApiError> {
    let strategy: Strategy = q
        .get("strategy")
        .map_or(Ok(Strategy::Greenfield), |s| s.parse())
        .map_err(ApiError::bad_request)?;
    let objectives: Objectives = q
        .get("objectives")
        .map_or(Ok(state.objectives), |s| s.parse())
        .map_err(ApiError::bad_request)?;
    let plan = match strategy {
        Strategy::Late => plan_late(&state.findings, &state.db),
        _ => plan_greenfield(&state.findings, &state.db, objectives),
    };
    Ok(Json(plan).into_response())
}

async fn get_whatif(
    State(state): State<Arc<AppState>>,
    Query(q): Query<BTreeMap<String, String>>,
) -> Result<Response, ApiError> {
    let selected = match q.get("sets") {
        Some(list) => parse_set_list(list).map_err(|e| ApiError::bad_request(e.to_string()))?,
        None => state.subset.clone().unwrap_or_default(),
    };
    Ok(Json(whatif_subset(&state.findings, &state.db, &selected)).into_response())
}

async fn get_prompt(Path(set): Path<String>) -> Result<Response, ApiError> {
    let set: RationaleSet = set
        .parse()
        .map_err(|e: misra_triage::DbError| ApiError::not_found(e.to_string()))?;
    Ok(
        Json(json!({ "set": set, "long_name": set.long_name(), "prompt": triage_prompt(set) }))
            .into_response(),
    )
}

async fn get_checklist(
    State(state): State<Arc<AppState>>,
    Path(guideline): Path<String>,
) -> Result<Response, ApiError> {
    let id: GuidelineId = guideline
        .parse()
        .map_err(|e: misra_triage::DbError| ApiError::bad_request(e.to_string()))?;
    let questions =
        deviation_checklist(&state.db, id).map_err(|e| ApiError::not_found(e.to_string()))?;
    Ok(Json(json!({ "guideline": id, "questions": questions })).into_response())
}

async fn get_decisions(State(state): State<Arc<AppState>>) -> Json<Vec<Decision>> {
    Json(state.decisions.lock().await.entries().to_vec())
}

async fn post_decision(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let decision: Decision = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("malformed decision: {e}")))?;
    let mut log = state.decisions.lock().await;
    check_decision(
        &decision,
        &state.findings,
        &state.refs,
        &state.records,
        &state.db,
    )
    .map_err(|e| match e {
        DecisionError::DanglingFinding(_) | DecisionError::DanglingRecord(_) => {
            ApiError::new(StatusCode::CONFLICT, "DanglingReference", e.to_string())
        }
        DecisionError::Rejected(reason) => {
            ApiError::new(StatusCode::BAD_REQUEST, reason.code(), e.to_string())
        }
    })?;
    log.append(decision.clone()).map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "StorageError",
            e.to_string(),
        )
    })?;
    Ok((StatusCode::CREATED, Json(decision)).into_response())
}

pub async fn serve(state: Arc<AppState>, host: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
