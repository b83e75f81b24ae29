use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use okdyn_cli::{load_presets, run, CliError};

/// Scenario runner for ring-of-integers dynamics experiments.
///
/// Exit status: 0 when every assertion passes, 1 when an assertion fails,
/// 2 on parse, validation, task or I/O errors.
#[derive(Parser)]
#[command(name = "okdyn", version)]
struct Cli {
    /// Default seed for tasks that do not set their own.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for reports.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory of extra preset files (`*.toml`).
    #[arg(long, global = true)]
    presets_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in a file and write reports.
    Run { file: PathBuf },
    /// Validate a scenario file without running it.
    Check { file: PathBuf },
    /// List fields, generators and families.
    Presets,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Task {
                scenario: String::new(),
                line: 0,
                message: e.to_string(),
            })?;
    }
    let presets = load_presets(cli.presets_dir.as_deref())?;
    match &cli.command {
        Command::Presets => {
            print!("{}", presets.listing());
            Ok(true)
        }
        Command::Check { file } => {
            let jobs = run::check_file(file, &presets, cli.seed)?;
            println!("{}: {} scenario(s) valid", file.display(), jobs.len());
            Ok(true)
        }
        Command::Run { file } => {
            let outcomes = run::run_file(file, &cli.out_dir, &presets, cli.seed)?;
            for o in &outcomes {
                let status = if o.pass { "pass" } else { "FAIL" };
                println!("{} ({}): {} [{}]", o.name, o.kind, o.summary, status);
            }
            Ok(outcomes.iter().all(|o| o.pass))
        }
    }
}
