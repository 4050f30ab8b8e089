use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fracmp_cli::{cmd_converge, cmd_solve, cmd_verify, init_thread_pool, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Solve,
    Verify,
    Converge,
}

#[derive(Debug, Parser)]
#[command(name = "fracmp", version, about = "Fractional p-Laplacian mountain-pass solver")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (flat dotted keys).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `solver.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `solver.tol_grad`.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    let result = RunConfig::load(&cli.config).and_then(|mut config| {
        if let Some(out) = cli.out {
            config.output_dir = out;
        }
        if let Some(seed) = cli.seed {
            config.solver.seed = seed;
        }
        if let Some(tol) = cli.tol {
            config.solver.tol_grad = tol;
        }
        match cli.command {
            Command::Solve => cmd_solve(&config),
            Command::Verify => cmd_verify(&config),
            Command::Converge => cmd_converge(&config),
        }
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
