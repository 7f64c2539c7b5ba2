use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use ramabound_cli::{
    classify, config_from_text, manifest_line, run, write_outputs, Command, RunConfig, Status,
};

#[derive(Parser)]
#[command(
    name = "ramabound",
    version,
    about = "Bounded-coefficient Dirichlet polynomial experiments"
)]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append the manifest record here (default: <out>.manifest, or stderr).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads (outputs do not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed of every random choice.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    #[command(flatten)]
    Run(Command),
    /// Re-execute the configuration embedded in an output file.
    Rerun { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e) as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<Status> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker threads")?;
    }
    let config = match cli.action {
        Action::Run(command) => RunConfig {
            seed: cli.seed,
            command,
        },
        Action::Rerun { file } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            config_from_text(&text)?
        }
    };
    let start = Instant::now();
    let outcome = run(&config)?;
    let written = write_outputs(&outcome, cli.out.as_deref())?;
    let status = outcome.status();
    let line = manifest_line(&config, &written, status, start.elapsed().as_secs_f64());
    let manifest = cli.manifest.or_else(|| {
        cli.out
            .as_ref()
            .map(|p| PathBuf::from(format!("{}.manifest", p.display())))
    });
    match manifest {
        Some(path) => {
            use std::io::Write;
            let mut f = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)
                .with_context(|| format!("opening {}", path.display()))?;
            writeln!(f, "{line}")?;
        }
        None => eprintln!("{line}"),
    }
    if status != Status::Ok {
        eprintln!("finished with status {} ({status:?})", status as u8);
    }
    Ok(status)
}
