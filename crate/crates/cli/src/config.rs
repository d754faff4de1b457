//! Project configuration and the loaded project state.
//!
//! The config file is `key = value` lines; `#` starts a comment. Relative
//! paths resolve against the config file's directory.
//!
//! ```text
//! findings = cppcheck.jsonl, eclair.jsonl
//! deviations = deviations.json
//! decisions = decisions.jsonl
//! recategorization = recategorization.json
//! objectives = portability, inexperienced_team
//! subset = LTLM, DEVM
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use misra_triage::findings::{parse_findings, Diagnostic, Finding};
use misra_triage::guideline_db::{
    parse_set_list, GuidelineDb, RationaleSet, RecategorizationEntry, RecategorizationPlan,
};
use misra_triage::planner::Objectives;
use misra_triage::triage::{parse_deviation_records, DecisionLog, DeviationRecord};
use thiserror::Error;

pub const DEFAULT_CONFIG: &str = "misra-triage.conf";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {reason}")]
    Syntax {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectConfig {
    pub findings: Vec<PathBuf>,
    pub deviations: Option<PathBuf>,
    pub decisions: Option<PathBuf>,
    pub recategorization: Option<PathBuf>,
    pub objectives: Objectives,
    pub subset: Option<Vec<RationaleSet>>,
}

impl ProjectConfig {
    pub fn parse(text: &str, origin: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut config = ProjectConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: String| ConfigError::Syntax {
                path: origin.to_string(),
                line: n + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let path = || base.join(value);
            match key {
                "findings" => config.findings.extend(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(|p| base.join(p)),
                ),
                "deviations" => config.deviations = Some(path()),
                "decisions" => config.decisions = Some(path()),
                "recategorization" => config.recategorization = Some(path()),
                "objectives" => config.objectives = value.parse().map_err(syntax)?,
                "subset" => {
                    config.subset = Some(parse_set_list(value).map_err(|e| syntax(e.to_string()))?)
                }
                _ => return Err(syntax(format!("unknown key `{key}`"))),
            }
        }
        Ok(config)
    }

    /// Reads `path`, or the default file in the working directory when it
    /// exists. No file at all gives an empty configuration.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let path = match path {
            Some(p) => p.to_path_buf(),
            None if Path::new(DEFAULT_CONFIG).exists() => PathBuf::from(DEFAULT_CONFIG),
            None => return Ok(Self::default()),
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &path.display().to_string(), &base)
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))
}

/// Everything a command needs, loaded once.
#[derive(Debug)]
pub struct Project {
    pub config: ProjectConfig,
    pub db: GuidelineDb,
    pub findings: Vec<Finding>,
    pub diagnostics: Vec<(PathBuf, Diagnostic)>,
    pub records: Vec<DeviationRecord>,
    pub decisions: DecisionLog,
}

impl Project {
    pub fn load(config: ProjectConfig) -> Result<Self, ConfigError> {
        let mut db = GuidelineDb::bundled().clone();
        if let Some(path) = &config.recategorization {
            let entries: Vec<RecategorizationEntry> = serde_json::from_str(&read(path)?)
                .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?;
            db = db
                .apply_recategorization(&RecategorizationPlan { entries })
                .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?;
        }
        let mut findings = Vec::new();
        let mut diagnostics = Vec::new();
        for path in &config.findings {
            let outcome = parse_findings(&read(path)?, &db);
            findings.extend(outcome.findings);
            diagnostics.extend(outcome.diagnostics.into_iter().map(|d| (path.clone(), d)));
        }
        let records = match &config.deviations {
            Some(path) => parse_deviation_records(&read(path)?)
                .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?,
            None => Vec::new(),
        };
        let decisions = match &config.decisions {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    if !dir.is_dir() {
                        return Err(ConfigError::Invalid(format!(
                            "{}: directory does not exist",
                            path.display()
                        )));
                    }
                }
                DecisionLog::open(path)
                    .map_err(|e| ConfigError::Io(path.display().to_string(), e))?
            }
            None => DecisionLog::in_memory(),
        };
        Ok(Self {
            config,
            db,
            findings,
            diagnostics,
            records,
            decisions,
        })
    }
}
