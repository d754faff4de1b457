use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use misra_triage::guideline_db::{parse_set_list, RationaleSet};
use misra_triage::planner::{Objectives, Strategy};
use misra_triage_cli::api::{self, AppState};
use misra_triage_cli::commands::{self, ReportFormat, Status};
use misra_triage_cli::config::{Project, ProjectConfig};

#[derive(Parser)]
#[command(
    name = "misra-triage",
    version,
    about = "Rationale-based triage of MISRA C findings"
)]
struct Cli {
    /// Project config file (default: ./misra-triage.conf when present)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Findings file in JSON Lines; repeatable, replaces the configured list
    #[arg(long, global = true)]
    findings: Vec<PathBuf>,
    /// Deviation records (JSON array)
    #[arg(long, global = true)]
    deviations: Option<PathBuf>,
    /// Decision log (JSON Lines, appended to by the service)
    #[arg(long, global = true)]
    decisions: Option<PathBuf>,
    /// Recategorization plan (JSON array of {guideline, category})
    #[arg(long, global = true)]
    recategorization: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone)]
struct SetList(Vec<RationaleSet>);

fn set_list(s: &str) -> Result<SetList, String> {
    parse_set_list(s).map(SetList).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Guideline database queries
    Db {
        #[command(subcommand)]
        command: DbCommand,
    },
    /// Findings per rationale set
    Classify {
        /// Print the findings of one set as JSON Lines instead of counts
        #[arg(long)]
        set: Option<RationaleSet>,
    },
    /// Remediation plan
    Plan {
        #[arg(long, value_parser = |s: &str| s.parse::<Strategy>())]
        strategy: Strategy,
        /// Comma-separated: portability, inexperienced_team, maintainability_reuse
        #[arg(long)]
        objectives: Option<Objectives>,
    },
    /// In-scope and out-of-scope findings for a subset of rationale sets
    Whatif {
        /// Comma-separated set codes; empty selects nothing
        #[arg(long, value_parser = set_list)]
        sets: Option<SetList>,
    },
    /// Deviation record checks
    Deviations {
        #[command(subcommand)]
        command: DeviationsCommand,
    },
    /// Classification, plans, deviation checks and compliance summary
    Report {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the built-in checkers (R21.1, R21.2, D4.10) over C sources
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Serve the JSON API
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Subcommand)]
enum DbCommand {
    /// Check the dataset's structural invariants
    Validate {
        /// Validate this dataset file instead of the bundled one
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Show one guideline
    Show { id: String },
}

#[derive(Subcommand)]
enum DeviationsCommand {
    /// Validate every record against the guideline categories
    Validate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

fn load_project(cli: &Cli) -> Result<Project, String> {
    let mut config = ProjectConfig::load(cli.config.as_deref()).map_err(|e| e.to_string())?;
    if !cli.findings.is_empty() {
        config.findings = cli.findings.clone();
    }
    for (flag, slot) in [
        (&cli.deviations, &mut config.deviations),
        (&cli.decisions, &mut config.decisions),
        (&cli.recategorization, &mut config.recategorization),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    Project::load(config).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Status {
    if let Command::Db {
        command: DbCommand::Validate { file },
    } = &cli.command
    {
        return commands::db_validate(file.as_deref());
    }
    if let Command::Check { paths } = &cli.command {
        return commands::check(paths);
    }
    let project = match load_project(&cli) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Usage;
        }
    };
    match cli.command {
        Command::Db {
            command: DbCommand::Show { id },
        } => commands::db_show(&project.db, &id),
        Command::Classify { set } => commands::classify(&project, set),
        Command::Plan {
            strategy,
            objectives,
        } => commands::plan(&project, strategy, objectives),
        Command::Whatif { sets } => commands::whatif(&project, sets.map(|s| s.0)),
        Command::Deviations {
            command: DeviationsCommand::Validate,
        } => commands::deviations_validate(&project),
        Command::Report { format } => commands::report(
            &project,
            match format {
                Format::Text => ReportFormat::Text,
                Format::Structured => ReportFormat::Structured,
            },
        ),
        Command::Serve { port, host } => {
            let state = Arc::new(AppState::new(project));
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Status::Failed;
                }
            };
            match runtime.block_on(api::serve(state, &host, port)) {
                Ok(()) => Status::Ok,
                Err(e) => {
                    eprintln!("error: {e}");
                    Status::Failed
                }
            }
        }
        Command::Db {
            command: DbCommand::Validate { .. },
        }
        | Command::Check { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()) as u8)
}
