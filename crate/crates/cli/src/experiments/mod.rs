//! Experiment drivers.
//!
//! Each experiment expands, per dimension, into independent tasks. Tasks run
//! on the current rayon pool and their rows are concatenated in task order,
//! so the report is the same for every thread count.

use hypclif_core::formulas::Sphere;
use hypclif_core::{Multivector, Point, RegionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::report::Row;
use crate::tolerances;

mod algebra;
mod boundary;
pub mod calibrate;
mod conformal;
mod kernels;
mod reconstruction;
mod volume;

type Task<'a> = Box<dyn Fn() -> Vec<Row> + Send + Sync + 'a>;

/// Run every selected experiment for every configured dimension.
///
/// The configuration must already be validated.
pub fn run_experiments(cfg: &ExperimentConfig) -> Vec<Row> {
    let ctx = Ctx { cfg };
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for &exp in &cfg.experiments {
        for &n in &cfg.dim {
            tasks.extend(tasks_for(&ctx, exp, n));
        }
    }
    let chunks: Vec<Vec<Row>> = tasks.par_iter().map(|t| t()).collect();
    chunks.into_iter().flatten().collect()
}

/// The transforms the conformal experiment draws for dimension `n`.
pub fn conformal_transforms(
    cfg: &ExperimentConfig,
    n: usize,
) -> Result<Vec<hypclif_core::VahlenTransform>, hypclif_core::Error> {
    conformal::transforms(&Ctx { cfg }, n)
}

fn tasks_for<'a>(ctx: &'a Ctx<'a>, exp: Experiment, n: usize) -> Vec<Task<'a>> {
    match exp {
        Experiment::AlgebraIdentities => algebra::tasks(ctx, n),
        Experiment::KernelResiduals => kernels::tasks(ctx, n),
        Experiment::Cauchy => reconstruction::cauchy_tasks(ctx, n),
        Experiment::BorelPompeiu => reconstruction::borel_pompeiu_tasks(ctx, n),
        Experiment::Green => reconstruction::green_tasks(ctx, n),
        Experiment::Convergence => reconstruction::convergence_tasks(ctx, n),
        Experiment::Teodorescu => volume::teodorescu_tasks(ctx, n),
        Experiment::Poisson => volume::poisson_tasks(ctx, n),
        Experiment::Plemelj => boundary::tasks(ctx, n),
        Experiment::Conformal => conformal::tasks(ctx, n),
        Experiment::Calibrate => calibrate::tasks(ctx, n),
    }
}

/// Shared state for building rows.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
}

/// Outcome of one measurement: a value or the error that prevented it.
pub(crate) type Measured = Result<f64, hypclif_core::Error>;

impl Ctx<'_> {
    pub fn tolerance(&self, exp: Experiment, check: &str) -> f64 {
        tolerances::tolerance(exp.name(), check) * self.cfg.tol_scale
    }

    /// A row; a failed measurement becomes NaN with the error in `param`.
    pub fn row(
        &self,
        exp: Experiment,
        check: &str,
        n: usize,
        order: Option<usize>,
        param: &str,
        value: Measured,
    ) -> Row {
        let (value, param) = match value {
            Ok(v) => (v, param.to_string()),
            Err(e) if param.is_empty() => (f64::NAN, format!("error: {e}")),
            Err(e) => (f64::NAN, format!("{param}; error: {e}")),
        };
        Row::new(exp.name(), check, n, order, param, value, self.tolerance(exp, check))
    }

    /// Generator for one `(experiment, n, stream)`, independent of scheduling.
    pub fn rng(&self, exp: Experiment, n: usize, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream((exp as u64) << 32 | (n as u64) << 16 | stream);
        r
    }

    pub fn center(&self, n: usize) -> Point {
        let mut c = Point::zeros(n);
        c.coords_mut()[n - 1] = self.cfg.region.height;
        c
    }

    pub fn radius(&self) -> f64 {
        self.cfg.region.radius
    }

    pub fn ball(&self, n: usize) -> RegionSpec {
        RegionSpec::Sphere {
            center: self.center(n),
            radius: self.radius(),
        }
    }

    pub fn sphere(&self, n: usize) -> Sphere {
        Sphere {
            center: self.center(n),
            radius: self.radius(),
        }
    }

    /// Configured orders after the per-dimension caps, without repeats.
    pub fn surface_orders(&self, n: usize) -> Vec<usize> {
        capped(&self.cfg.orders, surface_cap(n))
    }
}

fn capped(orders: &[usize], cap: usize) -> Vec<usize> {
    let mut out: Vec<usize> = orders.iter().map(|&o| o.min(cap)).collect();
    out.dedup();
    out
}

/// Product sphere rules have `2 order^{n-1}` nodes; higher dimensions are
/// capped to keep a run at desk scale.
pub(crate) fn surface_cap(n: usize) -> usize {
    match n {
        3 => usize::MAX,
        4 => 32,
        _ => 16,
    }
}

/// Polar volume rules carry one more factor of `order`.
pub(crate) fn volume_cap(n: usize) -> usize {
    match n {
        3 => 48,
        4 => 16,
        _ => 8,
    }
}

/// `|a - b| / |b|`, or `|a - b|` when `b` vanishes.
pub(crate) fn rel_err(a: &Multivector, b: &Multivector) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// Largest value, propagating NaN and the first error.
pub(crate) fn worst(values: impl IntoIterator<Item = Measured>) -> Measured {
    let mut m = 0.0f64;
    for v in values {
        let v = v?;
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.max(v);
    }
    Ok(m)
}

pub(crate) fn uniform_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64, height: (f64, f64)) -> Point {
    Point::new((0..n).map(|k| {
        if k == n - 1 {
            rng.gen_range(height.0..height.1)
        } else {
            rng.gen_range(lo..hi)
        }
    }))
}

pub(crate) fn random_multivector(rng: &mut ChaCha8Rng, n: usize) -> Multivector {
    let c: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(n, &c).expect("finite coefficients")
}

/// `center + t · unit(dir)`.
pub(crate) fn along(center: &Point, dir: &[f64], t: f64) -> Point {
    let d = Point::from_slice(dir);
    center.offset(&d.scale(1.0 / d.norm()), t)
}

/// A direction in `R^n` with the given first, second and last components.
pub(crate) fn direction(n: usize, first: f64, second: f64, last: f64) -> Vec<f64> {
    let mut d = vec![0.0; n];
    d[0] = first;
    d[1] += second;
    d[n - 1] += last;
    d
}

pub(crate) fn task<'a>(f: impl Fn() -> Vec<Row> + Send + Sync + 'a) -> Task<'a> {
    Box::new(f)
}
