//! The `dashforge` command line: validate, enrich, generate, targets.
//!
//! The three pipeline phases are independent commands so an operator can
//! iterate on any of them in any order; `generate` runs enrichment by
//! default so a bare KPI list goes to a dashboard in one step.
//!
//! Exit codes: 0 success, 1 semantic failure (validation errors, unknown
//! target, un-enriched input), 2 environmental failure (I/O, syntax or
//! schema errors, command-line misuse). Documents go to standard output or
//! `--out`; all diagnostics go to standard error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dsl::{dump_canonical, load_canonical, parse_model, serialize_model};
use crate::emit::{EmitError, EmitterRegistry};
use crate::enrich::enrich;
use crate::model::{validate_model, DashboardModel, Datasource, ValidationReport};

#[derive(Parser)]
#[command(
    name = "dashforge",
    version,
    about = "Compile KPI definitions into ready-to-import dashboards"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model against the metamodel invariants
    Validate {
        /// Model file (.dash or canonical .json)
        file: PathBuf,
        /// Input format; inferred from the extension when omitted
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Add generated visualizations to a model
    Enrich {
        /// Model file (.dash or canonical .json)
        file: PathBuf,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; defaults to the input format
        #[arg(long, value_enum)]
        emit_format: Option<InputFormat>,
        /// Input format; inferred from the extension when omitted
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Produce a dashboard document for a target platform
    Generate {
        /// Model file (.dash or canonical .json)
        file: PathBuf,
        /// Target platform (see `targets`)
        #[arg(long, env = "DASHFORGE_TARGET")]
        target: String,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the model as-is instead of enriching first
        #[arg(long)]
        no_enrich: bool,
        /// Override the model's datasource uid
        #[arg(long, requires = "datasource_type")]
        datasource_uid: Option<String>,
        /// Override the model's datasource type
        #[arg(long, requires = "datasource_uid")]
        datasource_type: Option<String>,
        /// Input format; inferred from the extension when omitted
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// List registered target platforms
    Targets {
        /// Include a description per target
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Dsl,
    Canonical,
}

/// A failed command: what to print on standard error and the exit code.
struct Failure {
    exit: i32,
    lines: Vec<String>,
}

impl Failure {
    fn semantic(lines: Vec<String>) -> Self {
        Failure { exit: 1, lines }
    }

    fn environment(line: String) -> Self {
        Failure {
            exit: 2,
            lines: vec![line],
        }
    }
}

/// Parse `std::env::args`, run the command, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Validate { file, format } => cmd_validate(&file, format),
        Command::Enrich {
            file,
            out,
            emit_format,
            format,
        } => cmd_enrich(&file, out.as_deref(), emit_format, format),
        Command::Generate {
            file,
            target,
            out,
            no_enrich,
            datasource_uid,
            datasource_type,
            format,
        } => cmd_generate(
            &file,
            &target,
            out.as_deref(),
            no_enrich,
            datasource_uid.zip(datasource_type),
            format,
        ),
        Command::Targets { verbose } => cmd_targets(verbose),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            for line in &failure.lines {
                stderr_line(line);
            }
            failure.exit
        }
    }
}

fn cmd_validate(file: &Path, format: Option<InputFormat>) -> Result<(), Failure> {
    let model = load_model(file, format)?;
    let report = validate_model(&model);
    for warning in &report.warnings {
        stderr_line(&format!("WARN {warning}"));
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::semantic(error_lines(&report)))
    }
}

fn cmd_enrich(
    file: &Path,
    out: Option<&Path>,
    emit_format: Option<InputFormat>,
    format: Option<InputFormat>,
) -> Result<(), Failure> {
    let input_format = format.unwrap_or_else(|| infer_format(file));
    let model = load_model_as(file, input_format)?;
    let model = validated(model)?;
    let enriched = enrich(&model).expect("model validated above");
    let document = match emit_format.unwrap_or(input_format) {
        InputFormat::Dsl => serialize_model(&enriched)
            .expect("enrichment preserves validity")
            .into_bytes(),
        InputFormat::Canonical => {
            dump_canonical(&enriched).expect("enrichment preserves validity")
        }
    };
    write_output(out, &document)
}

fn cmd_generate(
    file: &Path,
    target: &str,
    out: Option<&Path>,
    no_enrich: bool,
    datasource: Option<(String, String)>,
    format: Option<InputFormat>,
) -> Result<(), Failure> {
    let mut model = load_model(file, format)?;
    if let Some((uid, kind)) = datasource {
        model.datasource = Datasource { uid, kind };
    }
    let model = validated(model)?;
    let model = if no_enrich {
        model
    } else {
        enrich(&model).expect("model validated above")
    };

    let registry = EmitterRegistry::with_builtins();
    let result = registry.emit(&model, target).map_err(|e| match e {
        EmitError::UnknownTarget { .. } => {
            Failure::semantic(vec![format!("ERROR UNKNOWN_TARGET {e}")])
        }
        EmitError::NotEnriched { .. } => {
            Failure::semantic(vec![format!("ERROR NOT_ENRICHED {e}")])
        }
        EmitError::Invalid(invalid) => Failure::semantic(error_lines(&invalid.0)),
        other => Failure::semantic(vec![format!("ERROR EMIT {other}")]),
    })?;
    for warning in &result.warnings {
        stderr_line(&format!("WARN {warning}"));
    }
    write_output(out, &result.document)
}

fn cmd_targets(verbose: bool) -> Result<(), Failure> {
    let registry = EmitterRegistry::with_builtins();
    let mut listing = String::new();
    for target in registry.list_targets() {
        if verbose {
            listing.push_str(&format!("{}\t{}\n", target.name, target.description));
        } else {
            listing.push_str(&format!("{}\n", target.name));
        }
    }
    write_output(None, listing.as_bytes())
}

fn infer_format(path: &Path) -> InputFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => InputFormat::Canonical,
        _ => InputFormat::Dsl,
    }
}

fn load_model(path: &Path, format: Option<InputFormat>) -> Result<DashboardModel, Failure> {
    load_model_as(path, format.unwrap_or_else(|| infer_format(path)))
}

fn load_model_as(path: &Path, format: InputFormat) -> Result<DashboardModel, Failure> {
    let bytes = std::fs::read(path).map_err(|e| {
        Failure::environment(format!("ERROR IO {}: {e}", path.display()))
    })?;
    match format {
        InputFormat::Dsl => {
            let text = String::from_utf8(bytes).map_err(|_| {
                Failure::environment(format!(
                    "ERROR IO {}: input is not valid UTF-8",
                    path.display()
                ))
            })?;
            parse_model(&text).map_err(|e| {
                Failure::environment(format!(
                    "ERROR PARSE {} expected {} found {}",
                    e.location, e.expected, e.found
                ))
            })
        }
        InputFormat::Canonical => load_canonical(&bytes).map_err(|e| {
            Failure::environment(format!("ERROR SCHEMA {} {}", e.path, e.message))
        }),
    }
}

/// Run validation; print warnings, and fail with the error diagnostics.
fn validated(model: DashboardModel) -> Result<DashboardModel, Failure> {
    let report = validate_model(&model);
    for warning in &report.warnings {
        stderr_line(&format!("WARN {warning}"));
    }
    if report.is_valid() {
        Ok(model)
    } else {
        Err(Failure::semantic(error_lines(&report)))
    }
}

fn error_lines(report: &ValidationReport) -> Vec<String> {
    report.errors.iter().map(|d| format!("ERROR {d}")).collect()
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| {
            Failure::environment(format!("ERROR IO {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|()| stdout.flush())
                .map_err(|e| Failure::environment(format!("ERROR IO <stdout>: {e}")))
        }
    }
}

/// Best-effort stderr write; a broken stderr must not abort the process.
fn stderr_line(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}
