//! Teodorescu transform and Poisson extension.

use hypclif_core::calculus::{field, laplacian_hyperbolic, DiffConfig};
use hypclif_core::formulas::{
    poisson_boundary_limit, poisson_mass, poisson_rule, teodorescu_constant, teodorescu_m, FormulaId, PoissonExtension,
    TeodorescuField,
};
use hypclif_core::{CliffordField, Multivector, Point};

use super::{along, direction, task, volume_cap, worst, Ctx, Measured, Task};
use crate::config::Experiment;
use crate::report::Row;

// ------------------------------------------------------------ teodorescu

const EXTERIOR_ORDER: usize = 16;
const INTERIOR_ORDER: usize = 20;

/// `(1 - |x - c|²/R²)⁴ (e_1 + e_n/2 + 1/4)` inside the ball, zero outside.
fn bump(n: usize, center: Point, radius: f64) -> impl CliffordField + Clone {
    let shape = Multivector::e(n, 1) + Multivector::e(n, n).scale(0.5) + Multivector::scalar(n, 0.25);
    field(n, move |x: &Point| {
        let s = 1.0 - x.distance(&center).powi(2) / (radius * radius);
        shape.scale(if s > 0.0 { s.powi(4) } else { 0.0 })
    })
}

pub(super) fn teodorescu_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    vec![
        task(move || vec![teodorescu_exterior(ctx, n)]),
        task(move || vec![teodorescu_interior(ctx, n)]),
    ]
}

fn teodorescu_exterior(ctx: &Ctx, n: usize) -> Row {
    let c = ctx.center(n);
    let r = ctx.radius();
    let order = EXTERIOR_ORDER.min(volume_cap(n));
    let probes = [
        along(&c, &direction(n, 1.0, 0.0, 0.0), 1.8 * r),
        along(&c, &direction(n, 0.0, 1.0, -2.0), 1.8 * r),
        along(&c, &direction(n, 1.0, -1.0, 2.0), 1.6 * r),
    ];
    let value = (|| -> Measured {
        let f = TeodorescuField::new(bump(n, c.clone(), r), ctx.ball(n), order)?;
        worst(probes.iter().map(|y| {
            let m = teodorescu_m(&f, y, &ctx.cfg.diff())?;
            Ok(m.norm() / f.try_eval(y)?.norm().max(1.0))
        }))
    })();
    ctx.row(
        Experiment::Teodorescu,
        "exterior_m",
        n,
        Some(order),
        "probes=3 outside the support",
        value,
    )
}

fn teodorescu_interior(ctx: &Ctx, n: usize) -> Row {
    let c = ctx.center(n);
    let r = ctx.radius();
    let order = INTERIOR_ORDER.min(volume_cap(n));
    let mut y = c.clone();
    y.coords_mut()[0] += 0.2 * r;
    y.coords_mut()[1] -= 0.1 * r;
    y.coords_mut()[n - 1] += 0.2 * r;
    let value = (|| -> Measured {
        let density = bump(n, c.clone(), r);
        let want = density.eval(&y);
        let f = TeodorescuField::new(density, ctx.ball(n), order)?;
        // Outer differences over an inner quadrature: a wide step keeps the
        // quadrature noise from being amplified.
        let m = teodorescu_m(&f, &y, &DiffConfig::new(1e-2, 2)?)?;
        Ok((&m.scale(1.0 / teodorescu_constant(n)) - &want).norm())
    })();
    ctx.row(
        Experiment::Teodorescu,
        "interior_recovery",
        n,
        Some(order),
        "fd-step=1e-2 levels=2",
        value,
    )
}

// --------------------------------------------------------------- poisson

fn gaussian(n: usize) -> impl CliffordField {
    field(n, move |x: &Point| {
        let r2: f64 = x.coords()[..n - 1].iter().map(|c| c * c).sum();
        Multivector::scalar(n, (-r2).exp())
    })
}

/// `(order, panels)` of the half-space rule for the harmonicity and
/// boundary checks; the rule has `order^{n-1}` nodes per panel.
fn poisson_resolution(n: usize) -> (usize, usize) {
    match n {
        3 => (48, 8),
        4 => (24, 6),
        _ => (12, 4),
    }
}

fn base_point(n: usize, first: f64, second: f64, height: f64) -> Point {
    Point::new((0..n).map(|k| match k {
        _ if k == n - 1 => height,
        0 => first,
        1 => second,
        _ => 0.0,
    }))
}

pub(super) fn poisson_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    vec![
        task(move || vec![poisson_mass_row(ctx, n)]),
        task(move || vec![poisson_harmonic_row(ctx, n)]),
        task(move || vec![poisson_boundary_row(ctx, n)]),
    ]
}

fn poisson_mass_row(ctx: &Ctx, n: usize) -> Row {
    let y = base_point(n, 0.2, -0.1, 0.6);
    let value = (|| -> Measured {
        let rule = poisson_rule(&y, 24, 4)?;
        Ok((poisson_mass(&rule, &y, FormulaId::Poisson.reference_constant(n))? - 1.0).abs())
    })();
    ctx.row(Experiment::Poisson, "mass", n, Some(24), "panels=4", value)
}

fn poisson_harmonic_row(ctx: &Ctx, n: usize) -> Row {
    let y = base_point(n, 0.2, -0.1, 0.6);
    let (order, panels) = poisson_resolution(n);
    let value = (|| -> Measured {
        let rule = poisson_rule(&y, order, panels)?;
        let ext = PoissonExtension {
            phi: gaussian(n),
            rule: &rule,
            kappa: FormulaId::Poisson.reference_constant(n),
        };
        Ok(laplacian_hyperbolic(&ext, &y, &DiffConfig::new(1e-2, 3)?)?.norm())
    })();
    let param = format!("panels={panels} fd-step=1e-2 levels=3");
    ctx.row(
        Experiment::Poisson,
        "hyperbolic_harmonic",
        n,
        Some(order),
        &param,
        value,
    )
}

fn poisson_boundary_row(ctx: &Ctx, n: usize) -> Row {
    let foot = base_point(n, 0.3, 0.2, 0.0);
    let (order, panels) = poisson_resolution(n);
    let value = (|| -> Measured {
        let phi = gaussian(n);
        let k = FormulaId::Poisson.reference_constant(n);
        let lim = poisson_boundary_limit(&phi, &foot, [0.1, 0.05, 0.025], order, panels, k)?;
        Ok((&lim - &phi.eval(&foot)).norm())
    })();
    let param = format!("panels={panels} heights=0.1,0.05,0.025");
    ctx.row(Experiment::Poisson, "boundary_limit", n, Some(order), &param, value)
}
