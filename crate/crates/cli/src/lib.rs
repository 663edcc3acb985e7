//! Command-line front end: parse a problem file, run one command, emit a report.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run_command, Command, Overrides};
pub use error::CliError;
pub use problem::{parse_problem, ModeKind, Problem};
pub use report::{emit_report, Artifacts, Format, Report};

#[derive(Parser, Debug)]
#[command(name = "graphnyquist", version, about = "Sampling plans and recovery for bandlimited continuous-time graph signals")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Uniformity certificate, finitized and tightened vertex bandwidths.
    Analyze(Common),
    /// Filtration, admissible sequence, per-vertex rates and sample set.
    Plan(Common),
    /// Synthesize, sample, recover and report the recovery error.
    Simulate(Common),
    /// Rebalance the base sampling set across vertices.
    Redistribute {
        #[command(flatten)]
        common: Common,
        /// Comma-separated 1-based vertex numbers, e.g. 2,3,4.
        #[arg(long, value_delimiter = ',')]
        vstar: Option<Vec<usize>>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Periodic,
    Sinc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Plotdata,
}

#[derive(Args, Debug)]
struct Common {
    /// Problem file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Directory for output files; the report goes to stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Period T of the periodic signal model.
    #[arg(long)]
    period: Option<f64>,
    /// Sinc-mode window as START,END.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Eigendecomposition and rank tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

fn overrides(c: &Common, vstar: Option<&[usize]>) -> Result<Overrides, CliError> {
    if let Some(t) = c.period {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--period must be positive, got {t}")));
        }
    }
    if let Some(t) = c.tolerance {
        if !(t > 0.0) {
            return Err(CliError::Usage(format!("--tolerance must be positive, got {t}")));
        }
    }
    let window = match c.window.as_deref() {
        Some(&[a, b]) if a < b => Some((a, b)),
        Some(_) => return Err(CliError::Usage("--window needs START,END with START < END".into())),
        None => None,
    };
    let v_star = match vstar {
        Some(vs) if vs.contains(&0) => return Err(CliError::Usage("--vstar takes 1-based vertex numbers".into())),
        Some(vs) => Some(vs.iter().map(|v| v - 1).collect()),
        None => None,
    };
    Ok(Overrides {
        mode: c.mode.map(|m| match m {
            ModeArg::Periodic => ModeKind::Periodic,
            ModeArg::Sinc => ModeKind::Sinc,
        }),
        period: c.period,
        window,
        seed: c.seed,
        tolerance: c.tolerance,
        v_star,
    })
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (command, common, vstar) = match &cli.command {
        CliCommand::Analyze(c) => (Command::Analyze, c, None),
        CliCommand::Plan(c) => (Command::Plan, c, None),
        CliCommand::Simulate(c) => (Command::Simulate, c, None),
        CliCommand::Redistribute { common, vstar } => (Command::Redistribute, common, vstar.as_deref()),
    };
    let o = overrides(common, vstar)?;
    let format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Plotdata => Format::Plotdata,
    };
    let text = std::fs::read_to_string(&common.input).map_err(|e| CliError::Input {
        path: common.input.display().to_string(),
        message: e.to_string(),
    })?;
    let problem = parse_problem(&text)?;
    if let Some(v) = o.v_star.as_ref().and_then(|vs| vs.iter().find(|&&v| v >= problem.n())) {
        return Err(CliError::Usage(format!("--vstar vertex {} exceeds n = {}", v + 1, problem.n())));
    }
    let artifacts = run_command(command, &problem, &o)?;
    match &common.output {
        None => emit_report(&artifacts, format, stdout),
        Some(dir) => {
            let (name, body) = report::render(&artifacts, format)?;
            let path = dir.join(name);
            let io = |e: std::io::Error| CliError::Output {
                path: path.display().to_string(),
                message: e.to_string(),
            };
            std::fs::create_dir_all(dir).map_err(io)?;
            std::fs::write(&path, body).map_err(io)?;
            stdout
                .write_all(commands::human_summary(&artifacts).as_bytes())
                .map_err(io)
        }
    }
}

/// Runs the CLI on `args` and returns the process exit code. Errors go to
/// `stderr` as a single JSON line.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{e}");
            return error::EXIT_OK;
        }
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string());
            let _ = writeln!(stderr, "{}", err.to_json());
            let _ = write!(stderr, "{}", e.render());
            return err.exit_code();
        }
    };
    match execute(cli, stdout) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            log::debug!("{e:?}");
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
