//! Front end for `fracmp`: configuration files, the `solve`, `verify` and
//! `converge` commands, and their CSV/text outputs.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_converge, cmd_solve, cmd_verify};
pub use config::{Mode, RunConfig};
pub use error::CliError;

/// Environment variable capping the worker threads of a convergence study.
pub const THREADS_ENV: &str = "FRACMP_THREADS";

/// Builds the global thread pool from [`THREADS_ENV`] when it is set to a
/// positive integer. Safe to call more than once.
pub fn init_thread_pool() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
