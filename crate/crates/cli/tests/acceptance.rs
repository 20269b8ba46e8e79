//! Acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Every criterion runs the relevant experiments through the library at the
//! default configuration and judges the rows against the shared tolerance
//! table, plus a wall-clock budget.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hypclif::{run_with_threads, thread_count, Experiment, ExperimentConfig, Row};

struct Outcome {
    pass: bool,
    detail: String,
}

fn config(experiments: &[Experiment], dims: &[usize]) -> ExperimentConfig {
    let cfg = ExperimentConfig {
        dim: dims.to_vec(),
        experiments: experiments.to_vec(),
        ..ExperimentConfig::default()
    };
    cfg.validate().expect("valid acceptance config");
    cfg
}

fn run(experiments: &[Experiment], dims: &[usize]) -> (Vec<Row>, Duration) {
    let cfg = config(experiments, dims);
    let start = Instant::now();
    let rows = run_with_threads(&cfg, thread_count().expect("thread count")).expect("pool");
    (rows, start.elapsed())
}

/// Judge `rows` (already filtered) against their tolerances and `budget`.
fn judge(rows: &[&Row], elapsed: Duration, budget: f64) -> Outcome {
    let failing: Vec<&&Row> = rows.iter().filter(|r| !r.pass).collect();
    let secs = elapsed.as_secs_f64();
    let mut detail = format!(
        "{} rows, {} failing; {secs:.1} s of {budget:.0} s",
        rows.len(),
        failing.len()
    );
    if let Some(r) = failing.first() {
        detail += &format!(
            "; first failure {} {} n={} value={:.3e} tolerance={:.1e}",
            r.experiment, r.check, r.n, r.value, r.tolerance
        );
    }
    Outcome {
        pass: !rows.is_empty() && failing.is_empty() && secs < budget,
        detail,
    }
}

fn select(rows: &[Row], keep: impl Fn(&Row) -> bool) -> Vec<&Row> {
    rows.iter().filter(|r| keep(r)).collect()
}

fn is_point_source(r: &Row) -> bool {
    r.check.starts_with("point_source_identity")
}

fn algebra() -> [Outcome; 2] {
    let (rows, t) = run(&[Experiment::AlgebraIdentities], &[3, 4, 5]);
    // Both parts share one run; each is held to its own budget.
    [
        judge(&select(&rows, |r| !is_point_source(r)), t, 5.0),
        judge(&select(&rows, is_point_source), t, 2.0),
    ]
}

fn kernels() -> [Outcome; 2] {
    let (rows, t) = run(&[Experiment::KernelResiduals], &[3]);
    [
        judge(&select(&rows, |r| r.check.ends_with("_vs_fd")), t, 30.0),
        judge(&select(&rows, |r| !r.check.ends_with("_vs_fd")), t, 60.0),
    ]
}

fn calibration() -> Outcome {
    let (rows, t) = run(&[Experiment::Calibrate], &[3]);
    let mut out = judge(&select(&rows, |_| true), t, 120.0);
    let named = rows.iter().all(|r| r.param.contains("match="));
    let probes = rows.iter().all(|r| r.param.contains("probes=10"));
    out.pass &= named && probes && rows.len() == 14;
    out
}

fn reconstructions() -> Outcome {
    let (rows, t) = run(&[Experiment::Cauchy, Experiment::BorelPompeiu], &[3]);
    let has_64 = rows
        .iter()
        .any(|r| r.check == "full_inversion_image" && r.order == Some(64));
    let mut out = judge(&select(&rows, |_| true), t, 120.0);
    out.pass &= has_64;
    out
}

fn single(exp: Experiment, budget: f64) -> Outcome {
    let (rows, t) = run(&[exp], &[3]);
    judge(&select(&rows, |_| true), t, budget)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let cfg = r#"{"dim": [3, 4], "orders": [16, 32],
        "experiments": ["algebra-identities", "kernel-residuals", "cauchy", "borel-pompeiu", "conformal"],
        "probes": {"algebra": 200, "transforms": 4, "conformal-probes": 4}}"#;
    std::fs::write(dir.path().join("c.json"), cfg).expect("write config");
    let start = Instant::now();
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_hypclif"))
            .args(["run", "--config", "c.json", "--out", out, "--quiet"])
            .current_dir(dir.path())
            .env("HYPCLIF_THREADS", threads)
            .status()
            .expect("binary runs")
    };
    let a = run("1", "a.csv");
    let b = run("3", "b.csv");
    let ra = std::fs::read(dir.path().join("a.csv")).unwrap_or_default();
    let rb = std::fs::read(dir.path().join("b.csv")).unwrap_or_default();
    let same = !ra.is_empty() && ra == rb;
    Outcome {
        pass: a.success() && b.success() && same,
        detail: format!(
            "HYPCLIF_THREADS=1 vs 3: {} bytes, identical={same}; {:.1} s",
            ra.len(),
            start.elapsed().as_secs_f64()
        ),
    }
}

fn main() -> ExitCode {
    let names = [
        "algebra suite, n=3..5",
        "exact point-source identities, n=3..5",
        "closed-form kernel derivatives vs finite differences",
        "hypermonogenic and harmonic kernel residuals",
        "calibration of the formula constants",
        "Cauchy and Borel-Pompeiu reconstructions",
        "Green's formulas",
        "Teodorescu transform",
        "Plemelj jumps and Hardy projections",
        "Poisson extension",
        "conformal covariance",
        "determinism across thread counts",
    ];
    let mut outcomes: Vec<Outcome> = Vec::new();
    let mut report = |o: Outcome| {
        let k = outcomes.len();
        println!(
            "criterion {:>2} {} {}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            names[k],
            o.detail
        );
        outcomes.push(o);
    };
    for o in algebra() {
        report(o);
    }
    for o in kernels() {
        report(o);
    }
    report(calibration());
    report(reconstructions());
    report(single(Experiment::Green, 60.0));
    report(single(Experiment::Teodorescu, 180.0));
    report(single(Experiment::Plemelj, 300.0));
    report(single(Experiment::Poisson, 120.0));
    report(single(Experiment::Conformal, 120.0));
    report(determinism());
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
