use std::fs;
use std::path::{Path, PathBuf};

use misra_triage::checkers::{check_all, TranslationUnitView};
use misra_triage::findings::{classify_by_set, to_jsonl, Finding};
use misra_triage::guideline_db::{
    validate_dataset, Decidability, GuidelineDb, GuidelineId, GuidelineKind, RationaleSet, Scope,
};
use misra_triage::planner::{
    plan_greenfield, plan_late, render_plan_text, whatif_subset, Objectives, Strategy,
};
use misra_triage::report::{build_report, check_records, render_report_json, render_report_text};
use misra_triage::triage::deviation_checklist;
use walkdir::WalkDir;

use crate::config::Project;

/// Process exit status: success, validation or compliance failure, misuse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
}

pub fn db_validate(dataset: Option<&Path>) -> Status {
    let db = match dataset {
        None => GuidelineDb::bundled().clone(),
        Some(path) => {
            let parsed = fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|t| GuidelineDb::parse(&t).map_err(|e| e.to_string()));
            match parsed {
                Ok(db) => db,
                Err(e) => {
                    eprintln!("{}: {e}", path.display());
                    return Status::Failed;
                }
            }
        }
    };
    let report = validate_dataset(&db);
    if report.is_empty() {
        let memberships: usize = RationaleSet::ALL
            .iter()
            .map(|s| db.guidelines_in(*s).len())
            .sum();
        println!(
            "ok: {} guidelines, {} sets, {memberships} memberships",
            db.len(),
            RationaleSet::ALL.len()
        );
        Status::Ok
    } else {
        for v in &report.violations {
            println!("violation: {}", v.message);
        }
        Status::Failed
    }
}

pub fn db_show(db: &GuidelineDb, id: &str) -> Status {
    let id: GuidelineId = match id.parse() {
        Ok(id) => id,
        Err(e) => {
            eprintln!("{e}");
            return Status::Usage;
        }
    };
    let g = match db.lookup(id) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            return Status::Failed;
        }
    };
    println!("{}", g.id);
    println!(
        "  kind:          {}",
        if g.kind == GuidelineKind::Rule {
            "rule"
        } else {
            "directive"
        }
    );
    match g.recategorized_from {
        Some(from) => println!(
            "  category:      {} (recategorized from {from})",
            g.category
        ),
        None => println!("  category:      {}", g.category),
    }
    if g.disapplied {
        println!("  disapplied:    yes");
    }
    let decidability = match g.decidability {
        Decidability::Decidable => "decidable",
        Decidability::Undecidable => "undecidable",
        Decidability::NotApplicable => "not applicable (directive)",
        Decidability::Unknown => "unknown",
    };
    let scope = match g.scope {
        Scope::SingleTranslationUnit => "single translation unit",
        Scope::System => "system",
        Scope::Unknown => "unknown",
    };
    println!("  decidability:  {decidability}");
    println!("  scope:         {scope}");
    let sets: Vec<String> = g
        .rationale_sets
        .iter()
        .map(|s| format!("{} ({})", s.code(), s.long_name()))
        .collect();
    println!("  sets:          {}", sets.join(", "));
    if let Some(note) = &g.note {
        println!("  note:          {note}");
    }
    println!("  checklist:");
    for q in deviation_checklist(db, id).unwrap_or_default() {
        println!("    - {q}");
    }
    Status::Ok
}

fn report_diagnostics(project: &Project) {
    for (path, d) in &project.diagnostics {
        eprintln!("{}: {d}", path.display());
    }
}

pub fn classify(project: &Project, set: Option<RationaleSet>) -> Status {
    report_diagnostics(project);
    let view = classify_by_set(&project.findings, &project.db);
    match set {
        Some(set) => print!("{}", to_jsonl(view.bucket(set))),
        None => {
            for (set, n) in view.counts() {
                println!("{:<5} {:>6}  {}", set.code(), n, set.long_name());
            }
            println!("distinct findings: {}", view.distinct_total);
        }
    }
    if project.diagnostics.is_empty() {
        Status::Ok
    } else {
        Status::Failed
    }
}

pub fn plan(project: &Project, strategy: Strategy, objectives: Option<Objectives>) -> Status {
    report_diagnostics(project);
    let plan = match strategy {
        Strategy::Late => plan_late(&project.findings, &project.db),
        _ => plan_greenfield(
            &project.findings,
            &project.db,
            objectives.unwrap_or(project.config.objectives),
        ),
    };
    print!("{}", render_plan_text(&plan));
    Status::Ok
}

pub fn whatif(project: &Project, sets: Option<Vec<RationaleSet>>) -> Status {
    report_diagnostics(project);
    let selected = sets
        .or_else(|| project.config.subset.clone())
        .unwrap_or_default();
    let report = whatif_subset(&project.findings, &project.db, &selected);
    let names: Vec<&str> = report.selected.iter().map(|s| s.code()).collect();
    println!(
        "selected: {}",
        if names.is_empty() {
            "(none)".to_string()
        } else {
            names.join(",")
        }
    );
    println!("in-scope: {}", report.in_scope_count);
    println!("out-of-scope: {}", report.out_of_scope_count);
    if !report.excluded.is_empty() {
        println!("excluded (disapplied): {}", report.excluded.len());
    }
    for (set, n) in &report.per_set {
        println!("  {:<5} {:>6}", set.code(), n);
    }
    Status::Ok
}

pub fn deviations_validate(project: &Project) -> Status {
    let checks = check_records(&project.records, &project.db);
    if checks.is_empty() {
        println!("no deviation records");
    }
    let mut status = Status::Ok;
    for c in &checks {
        println!("{} {} {}", c.id, c.guideline, c.result);
        for w in &c.warnings {
            println!("  warning: {w}");
        }
        if c.result != "accepted" {
            status = Status::Failed;
        }
    }
    status
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

pub fn report(project: &Project, format: ReportFormat) -> Status {
    report_diagnostics(project);
    let report = match build_report(
        &project.findings,
        project.decisions.entries(),
        &project.records,
        &project.db,
        project.config.objectives,
    ) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return Status::Failed;
        }
    };
    match format {
        ReportFormat::Text => print!("{}", render_report_text(&report)),
        ReportFormat::Structured => print!("{}", render_report_json(&report)),
    }
    if report.passes() {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn is_c_source(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("c") || e.eq_ignore_ascii_case("h"))
}

/// Expands directories to the C sources under them, in sorted order.
pub fn collect_sources(paths: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            for entry in WalkDir::new(path).sort_by_file_name() {
                let entry = entry.map_err(|e| e.to_string())?;
                if entry.file_type().is_file() && is_c_source(entry.path()) {
                    files.push(entry.into_path());
                }
            }
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            return Err(format!("{}: no such file or directory", path.display()));
        }
    }
    Ok(files)
}

/// Runs the built-in checkers; findings go to stdout as JSON Lines.
pub fn check(paths: &[PathBuf]) -> Status {
    let files = match collect_sources(paths) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return Status::Usage;
        }
    };
    let mut all: Vec<Finding> = Vec::new();
    for file in &files {
        let bytes = match fs::read(file) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("{}: {e}", file.display());
                return Status::Usage;
            }
        };
        let tu = TranslationUnitView::from_bytes(file.display().to_string(), &bytes);
        for e in &tu.errors {
            eprintln!("{}:{}:{}: {:?}", tu.path, e.line, e.column, e.kind);
        }
        all.extend(check_all(&tu));
    }
    print!("{}", to_jsonl(&all));
    eprintln!("checked {} files, {} findings", files.len(), all.len());
    if all.is_empty() {
        Status::Ok
    } else {
        Status::Failed
    }
}
