//! Verification harness for `hypclif-core`.
//!
//! Experiments turn the library's identities and reconstruction formulas into
//! report rows `(experiment, check, n, order, param, value, tolerance, pass)`.
//! Rows are produced in a fixed order, so a report depends only on the
//! configuration and never on the number of worker threads.

pub mod config;
pub mod experiments;
pub mod report;
pub mod rules;
pub mod tolerances;
pub mod transforms;

pub use config::{ConfigError, Experiment, ExperimentConfig, Format};
pub use experiments::{conformal_transforms, run_experiments};
pub use report::{read_report, render_table, write_report, Row};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "HYPCLIF_THREADS";

/// Worker count from `HYPCLIF_THREADS`, defaulting to the available cores.
pub fn thread_count() -> Result<usize, ConfigError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(ConfigError(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |k| k.get())),
    }
}

/// Run `cfg` on a pool of `threads` workers.
pub fn run_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<Row>, ConfigError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ConfigError(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| run_experiments(cfg)))
}
