//! Closed-form kernels against finite differences, and the kernels' own
//! differential equations.

use hypclif_core::kernels::{derivative_deviations, kernel_residuals};
use hypclif_core::Point;
use rand_chacha::ChaCha8Rng;

use super::{random_multivector, task, uniform_point, worst, Ctx, Task};
use crate::config::Experiment;
use crate::report::Row;

const EXP: Experiment = Experiment::KernelResiduals;

/// Pairs are kept at least this far apart.
const MIN_SEPARATION: f64 = 0.3;

pub(super) fn tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    vec![task(move || derivatives(ctx, n)), task(move || residuals(ctx, n))]
}

/// Unit-scale pair with separation in `[MIN_SEPARATION, 1.5]`.
fn pair(rng: &mut ChaCha8Rng, n: usize) -> (Point, Point) {
    loop {
        let x = uniform_point(rng, n, -0.5, 0.5, (0.5, 1.5));
        let y = uniform_point(rng, n, -0.5, 0.5, (0.5, 1.5));
        let d = x.distance(&y);
        if (MIN_SEPARATION..=1.5).contains(&d) {
            return (x, y);
        }
    }
}

fn derivatives(ctx: &Ctx, n: usize) -> Vec<Row> {
    let mut rng = ctx.rng(EXP, n, 0);
    let count = ctx.cfg.probes.kernel_pairs;
    let diff = ctx.cfg.diff();
    let devs: Vec<_> = (0..count)
        .map(|_| {
            let (x, y) = pair(&mut rng, n);
            derivative_deviations(&x, &y, &diff)
        })
        .collect();
    let param = format!("pairs={count}");
    let col = |f: fn(&hypclif_core::kernels::DerivativeDeviations) -> f64| {
        worst(devs.iter().map(|d| d.as_ref().map(f).map_err(Clone::clone)))
    };
    vec![
        ctx.row(EXP, "p_vs_fd", n, None, &param, col(|d| d.p)),
        ctx.row(EXP, "h_vs_fd", n, None, &param, col(|d| d.h)),
        ctx.row(EXP, "q_vs_fd", n, None, &param, col(|d| d.q)),
        ctx.row(EXP, "dy_e_vs_fd", n, None, &param, col(|d| d.dy_e)),
        ctx.row(EXP, "dy_f_vs_fd", n, None, &param, col(|d| d.dy_f)),
    ]
}

fn residuals(ctx: &Ctx, n: usize) -> Vec<Row> {
    let mut rng = ctx.rng(EXP, n, 1);
    let count = ctx.cfg.probes.residual_points;
    let diff = ctx.cfg.diff();
    let res: Vec<_> = (0..count)
        .map(|_| {
            let (x, y) = pair(&mut rng, n);
            let l = random_multivector(&mut rng, n);
            kernel_residuals(&x, &y, &l, &diff)
        })
        .collect();
    let param = format!("points={count} separation>={MIN_SEPARATION}");
    let col = |f: fn(&hypclif_core::kernels::KernelResiduals) -> f64| {
        worst(res.iter().map(|d| d.as_ref().map(f).map_err(Clone::clone)))
    };
    vec![
        ctx.row(EXP, "m_x_p", n, None, &param, col(|r| r.p_x)),
        ctx.row(EXP, "m_y_h", n, None, &param, col(|r| r.h_y)),
        ctx.row(EXP, "m_y_point_source", n, None, &param, col(|r| r.point_source)),
        ctx.row(EXP, "green_harmonic_x", n, None, &param, col(|r| r.g_x)),
        ctx.row(EXP, "green_harmonic_y", n, None, &param, col(|r| r.g_y)),
        ctx.row(EXP, "prime_green_y", n, None, &param, col(|r| r.h_prime_y)),
    ]
}
