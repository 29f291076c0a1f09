use clap::{Parser, Subcommand};
use dirac_cli::runner::{run_text, RunError, RunOptions};
use dirac_cli::{acceptance, report, scenario};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact cubic Dirac cohomology on truncated category O modules.
#[derive(Parser)]
#[command(name = "dirac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its result bundle.
    Run {
        scenario: PathBuf,
        /// Override the scenario depth.
        #[arg(long)]
        depth: Option<i64>,
        /// Bundle directory (default: the scenario's `output`, else $DIRAC_OUT_DIR/<name>, else dirac-out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print a bundle as text tables.
    Report { bundle: PathBuf },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;

fn run(path: PathBuf, depth: Option<i64>, out: Option<PathBuf>, jobs: usize) -> ExitCode {
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", path.display(), e);
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let sc = match scenario::parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {}", path.display(), e);
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let dir = out.or_else(|| sc.output.clone().map(PathBuf::from)).unwrap_or_else(|| {
        let base = std::env::var_os("DIRAC_OUT_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("dirac-out"));
        base.join(&sc.name)
    });
    let bundle = match run_text(&text, &RunOptions { depth, jobs }) {
        Ok(b) => b,
        Err(RunError::Parse(e)) => {
            eprintln!("error: {}: {}", path.display(), e);
            return ExitCode::from(EXIT_PARSE);
        }
        Err(e @ RunError::Build(_)) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_FAIL);
        }
    };
    if let Err(e) = bundle.write(&dir) {
        eprintln!("error: cannot write bundle to {}: {}", dir.display(), e);
        return ExitCode::from(EXIT_FAIL);
    }
    let failures = bundle.failures();
    match failures.first() {
        None => {
            println!("{}: pass ({})", bundle.scenario, dir.display());
            ExitCode::SUCCESS
        }
        Some(first) => {
            let detail = bundle
                .tasks
                .iter()
                .flat_map(|t| t.assertions.iter().filter(|a| !a.pass))
                .map(|a| a.detail.clone())
                .next()
                .unwrap_or_default();
            eprintln!(
                "{}: FAIL at {} {} ({} failing; bundle in {})",
                bundle.scenario,
                first,
                detail,
                failures.len(),
                dir.display()
            );
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, depth, out, jobs } => run(scenario, depth, out, jobs),
        Command::Report { bundle } => match report::render(&bundle) {
            Ok(s) => {
                print!("{}", s);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {:#}", e);
                ExitCode::from(EXIT_PARSE)
            }
        },
        Command::Selftest { jobs } => {
            let results = acceptance::run_all(jobs, |c| println!("{}", c.line()));
            if results.iter().all(|c| c.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}
