//! `hypclif`: run the verification suite, print reports, calibrate constants.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hypclif::experiments::calibrate::settings;
use hypclif::{
    conformal_transforms, read_report, render_table, run_with_threads, thread_count, transforms, write_report,
    ConfigError, Experiment, ExperimentConfig, Format, Row,
};
use hypclif_core::formulas::{calibrate_with, FormulaId};

#[derive(Parser)]
#[command(
    name = "hypclif",
    version,
    about = "Verification harness for hyperbolic Clifford analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run experiments and write a report. Exit 0 iff every check passes.
    Run(RunArgs),
    /// Print report files as a table, failures first.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Measure each formula's constant and compare it with the printed variants.
    Calibrate {
        #[arg(long, value_delimiter = ',', default_value = "3")]
        dim: Vec<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, value_delimiter = ',')]
    experiment: Option<Vec<Experiment>>,
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Skip the table on standard output.
    #[arg(long)]
    quiet: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = &self.dim {
            cfg.dim = v.clone();
        }
        if let Some(v) = &self.orders {
            cfg.orders = v.clone();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        if let Some(v) = &self.experiment {
            cfg.experiments = v.clone();
        }
        if let Some(v) = self.tol_scale {
            cfg.tol_scale = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `report.csv` -> `report.transforms.json`.
fn transforms_path(out: &Path) -> PathBuf {
    out.with_extension("transforms.json")
}

fn write_transforms(cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let mut all = Vec::new();
    for &n in &cfg.dim {
        all.extend(conformal_transforms(cfg, n).map_err(|e| ConfigError(format!("sampling transforms: {e}")))?);
    }
    let path = transforms_path(&cfg.out);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, transforms::to_json(&all)?)
        .and_then(|_| std::fs::rename(&tmp, &path))
        .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))
}

fn run(args: &RunArgs) -> Result<Vec<Row>, ConfigError> {
    let cfg = args.config()?;
    let threads = thread_count()?;
    let rows = run_with_threads(&cfg, threads)?;
    write_report(&cfg.out, cfg.format, &rows)?;
    if cfg.experiments.contains(&Experiment::Conformal) {
        write_transforms(&cfg)?;
    }
    Ok(rows)
}

fn run_command(args: &RunArgs) -> ExitCode {
    let rows = match run(args) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("hypclif: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    if !args.quiet {
        print!("{}", render_table(&rows));
    }
    let failing: Vec<&Row> = rows.iter().filter(|r| !r.pass).collect();
    if failing.is_empty() {
        return ExitCode::SUCCESS;
    }
    eprintln!("hypclif: {} of {} checks failed", failing.len(), rows.len());
    for r in failing {
        let order = r.order.map_or_else(|| "-".to_string(), |o| o.to_string());
        eprintln!(
            "  {} {} n={} order={} value={:.3e} tolerance={:.1e} {}",
            r.experiment, r.check, r.n, order, r.value, r.tolerance, r.param
        );
    }
    ExitCode::from(EXIT_FAIL)
}

fn report_command(files: &[PathBuf]) -> ExitCode {
    let mut rows = Vec::new();
    for f in files {
        match read_report(f) {
            Ok(r) => rows.extend(r),
            Err(e) => {
                eprintln!("hypclif: {e}");
                return ExitCode::from(EXIT_ERROR);
            }
        }
    }
    print!("{}", render_table(&rows));
    ExitCode::SUCCESS
}

fn calibrate_command(dims: &[usize]) -> ExitCode {
    let mut status = ExitCode::SUCCESS;
    println!(
        "{:<18} {:>2} {:>22} {:>22} {:>10}  match",
        "formula", "n", "kappa measured", "kappa reference", "spread"
    );
    for &n in dims {
        for id in FormulaId::ALL {
            match calibrate_with(id, n, &settings(n)) {
                Ok(r) => println!(
                    "{:<18} {:>2} {:>22.15e} {:>22.15e} {:>10.2e}  {}",
                    id.name(),
                    n,
                    r.kappa_measured,
                    r.kappa_reference,
                    r.spread,
                    r.best_match
                ),
                Err(e) => {
                    println!("{:<18} {:>2} error: {e}", id.name(), n);
                    status = ExitCode::from(EXIT_FAIL);
                }
            }
        }
    }
    status
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Report { files } => report_command(files),
        Command::Calibrate { dim } => calibrate_command(dim),
    }
}
