//! Plemelj jump relations, Hardy projections and the Kerzman-Stein operator
//! on the test sphere.
//!
//! Boundary layers are only run for `n = 3`: the cap-excision rules scale
//! like the surface rules and carry no extra information in higher dimension.

use hypclif_core::calculus::field;
use hypclif_core::formulas::{
    discrete_pairing, hardy_project, kerzman_stein, kerzman_stein_nystrom, kerzman_stein_pv, plemelj_boundary,
    HardyField, PlemeljConfig, Sphere,
};
use hypclif_core::quadrature::sphere_rule;
use hypclif_core::{CliffordField, Multivector, Point};

use super::{task, worst, Ctx, Measured, Task};
use crate::config::Experiment;
use crate::report::Row;

const EXP: Experiment = Experiment::Plemelj;
/// Order of the inner projection when two are composed.
const NESTED_ORDER: usize = 10;
const NYSTROM_ORDER: usize = 8;

fn smooth(n: usize) -> impl CliffordField + Clone {
    field(n, move |x: &Point| {
        Multivector::scalar(n, x[0] * x[1])
            + Multivector::e(n, 1).scale(x.xn())
            + Multivector::e(n, n).scale(0.3 * x[1])
            + Multivector::blade(n, 0b011, 0.2 + x[0])
    })
}

fn constant(n: usize) -> impl CliffordField + Clone {
    field(n, move |_: &Point| Multivector::e(n, 1))
}

/// `count` points on the sphere, the first at direction `(0.6, 0, .., 0.8)`
/// and the rest on a golden-angle spiral.
fn boundary_points(sphere: &Sphere, count: usize) -> Vec<Point> {
    let n = sphere.center.dim();
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let mut d = vec![0.0; n];
            if i == 0 {
                d[0] = 0.6;
                d[n - 1] = 0.8;
            } else {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let s = (1.0 - z * z).sqrt();
                d[0] = s * (golden * i as f64).cos();
                d[1] = s * (golden * i as f64).sin();
                d[n - 1] = z;
            }
            sphere.center.offset(&Point::from_slice(&d), sphere.radius)
        })
        .collect()
}

pub(super) fn tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    if n != 3 {
        return Vec::new();
    }
    let mut out: Vec<Task<'a>> = vec![
        task(move || jump_rows(ctx, n, false)),
        task(move || jump_rows(ctx, n, true)),
    ];
    for i in 0..ctx.cfg.probes.hardy_points {
        out.push(task(move || vec![hardy_idempotent(ctx, n, i)]));
        out.push(task(move || vec![hardy_annihilation(ctx, n, i)]));
    }
    out.push(task(move || kerzman_stein_rows(ctx, n)));
    out
}

fn jump_rows(ctx: &Ctx, n: usize, smooth_density: bool) -> Vec<Row> {
    let sphere = ctx.sphere(n);
    let cfg = PlemeljConfig::default();
    let points = boundary_points(&sphere, 3);
    let results: Vec<Result<(f64, f64), hypclif_core::Error>> = points
        .iter()
        .map(|y| {
            let (r, phi_y) = if smooth_density {
                let phi = smooth(n);
                (plemelj_boundary(&phi, &sphere, y, &cfg)?, phi.eval(y))
            } else {
                let phi = constant(n);
                (plemelj_boundary(&phi, &sphere, y, &cfg)?, phi.eval(y))
            };
            Ok((r.jump_residual(&phi_y), r.half_residual(&phi_y)))
        })
        .collect();
    let jump = worst(results.iter().map(|r| r.clone().map(|v| v.0)));
    let half = worst(results.iter().map(|r| r.clone().map(|v| v.1)));
    let (suffix, param) = if smooth_density {
        ("smooth", "phi=x1 x2 + x_n e1 + 0.3 x2 e_n + (0.2 + x1) e12; points=3")
    } else {
        ("constant", "phi=e1; points=3")
    };
    vec![
        ctx.row(EXP, &format!("jump_{suffix}"), n, Some(cfg.order), param, jump),
        ctx.row(EXP, &format!("half_{suffix}"), n, Some(cfg.order), param, half),
    ]
}

fn nested_cfg() -> PlemeljConfig {
    PlemeljConfig {
        order: NESTED_ORDER,
        ..PlemeljConfig::default()
    }
}

fn hardy_point(ctx: &Ctx, n: usize, i: usize) -> Point {
    boundary_points(&ctx.sphere(n), ctx.cfg.probes.hardy_points)[i].clone()
}

/// `|P₊ P₊ φ - P₊ φ|` at one boundary point.
fn hardy_idempotent(ctx: &Ctx, n: usize, i: usize) -> Row {
    let sphere = ctx.sphere(n);
    let y = hardy_point(ctx, n, i);
    let cfg = nested_cfg();
    let value = (|| -> Measured {
        let once = HardyField {
            inner: smooth(n),
            sphere: sphere.clone(),
            sign: 1.0,
            cfg,
        };
        let twice = hardy_project(&once, &sphere, 1.0, std::slice::from_ref(&y), &cfg)?;
        Ok((&twice[0] - &once.eval(&y)).norm())
    })();
    ctx.row(
        EXP,
        "hardy_idempotent",
        n,
        Some(NESTED_ORDER),
        &format!("point={i}"),
        value,
    )
}

/// `|P₊ P₋ φ|` at one boundary point.
fn hardy_annihilation(ctx: &Ctx, n: usize, i: usize) -> Row {
    let sphere = ctx.sphere(n);
    let y = hardy_point(ctx, n, i);
    let cfg = nested_cfg();
    let value = (|| -> Measured {
        let minus = HardyField {
            inner: smooth(n),
            sphere: sphere.clone(),
            sign: -1.0,
            cfg,
        };
        Ok(hardy_project(&minus, &sphere, 1.0, std::slice::from_ref(&y), &cfg)?[0].norm())
    })();
    ctx.row(
        EXP,
        "hardy_annihilation",
        n,
        Some(NESTED_ORDER),
        &format!("point={i}"),
        value,
    )
}

fn kerzman_stein_rows(ctx: &Ctx, n: usize) -> Vec<Row> {
    let sphere = ctx.sphere(n);
    let cfg = PlemeljConfig::default();
    let y = boundary_points(&sphere, 1).remove(0);
    let vs_pv = (|| -> Measured {
        let phi = smooth(n);
        let direct = kerzman_stein(&phi, &sphere, &y, &cfg)?;
        let oracle = kerzman_stein_pv(&phi, &sphere, &y, &cfg)?;
        Ok((&direct - &oracle).norm())
    })();
    let skew = (|| -> Measured {
        let rule = sphere_rule(&sphere.spec(), NYSTROM_ORDER)?;
        let phi = smooth(n);
        let f: Vec<Multivector> = rule.nodes().iter().map(|x| phi.eval(x)).collect();
        let g: Vec<Multivector> = rule
            .nodes()
            .iter()
            .map(|x| Multivector::e(n, 2).scale(x[0]) + Multivector::scalar(n, x.xn()))
            .collect();
        let af = kerzman_stein_nystrom(&f, &rule)?;
        let ag = kerzman_stein_nystrom(&g, &rule)?;
        Ok((discrete_pairing(&af, &g, &rule) + discrete_pairing(&f, &ag, &rule)).abs())
    })();
    vec![
        ctx.row(
            EXP,
            "kerzman_stein_vs_pv",
            n,
            Some(cfg.order),
            "graded rule vs two principal values",
            vs_pv,
        ),
        ctx.row(
            EXP,
            "kerzman_stein_skew",
            n,
            Some(NYSTROM_ORDER),
            "<Af, g> + <f, Ag>",
            skew,
        ),
    ]
}
