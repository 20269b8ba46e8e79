//! Covariance of the operators under random half-space Möbius transforms.

use hypclif_core::calculus::field;
use hypclif_core::formulas::{
    conformal_covariance_residual, default_probes, laplacian_covariance_residual, transformed_cauchy, LaplacianKind,
    PowerFunction,
};
use hypclif_core::mobius::{sample_transform_with, Subgroup};
use hypclif_core::{Multivector, Point, VahlenTransform};

use super::{rel_err, surface_cap, task, worst, Ctx, Measured, Task};
use crate::config::Experiment;

const EXP: Experiment = Experiment::Conformal;
/// Transforms used for the (more expensive) transformed Cauchy check.
const CAUCHY_TRANSFORMS: usize = 5;
const CAUCHY_ORDER: usize = 32;

/// The configured number of transforms, drawn from one stream so every
/// check sees the same ones.
pub(super) fn transforms(ctx: &Ctx, n: usize) -> Result<Vec<VahlenTransform>, hypclif_core::Error> {
    let mut rng = ctx.rng(EXP, n, 0);
    (0..ctx.cfg.probes.transforms)
        .map(|_| sample_transform_with(n, &mut rng, Subgroup::UpperHalfSpace))
        .collect()
}

fn over_transforms(ctx: &Ctx, n: usize, f: impl Fn(&VahlenTransform, &[Point]) -> Measured) -> Measured {
    let probes = default_probes(n, ctx.cfg.probes.conformal_probes);
    worst(transforms(ctx, n)?.iter().map(|psi| f(psi, &probes)))
}

pub(super) fn tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    let param = format!(
        "transforms={} probes={}",
        ctx.cfg.probes.transforms, ctx.cfg.probes.conformal_probes
    );
    let p = param.clone();
    let pullback = move || {
        let value = over_transforms(ctx, n, |psi, probes| {
            let f = PowerFunction::new(n, -1)?;
            conformal_covariance_residual::<_, PowerFunction>(&f, None, psi, probes, &ctx.cfg.diff())
        });
        vec![ctx.row(
            EXP,
            "hypermonogenic_pullback",
            n,
            None,
            &format!("{p} f=-v^-1 e1"),
            value,
        )]
    };
    let p = param.clone();
    let intertwining = move || {
        let value = over_transforms(ctx, n, |psi, probes| {
            let f = field(n, move |x: &Point| Multivector::e(n, 1).scale(x.xn()));
            let mf = field(n, move |_: &Point| &Multivector::e(n, n) * &Multivector::e(n, 1));
            conformal_covariance_residual(&f, Some(&mf), psi, probes, &ctx.cfg.diff())
        });
        vec![ctx.row(EXP, "m_intertwining", n, None, &format!("{p} f=x_n e1"), value)]
    };
    let p = param.clone();
    let hyperbolic = move || {
        let value = over_transforms(ctx, n, |psi, probes| {
            let phi = field(n, move |x: &Point| Multivector::scalar(n, x.xn() * x.xn()));
            laplacian_covariance_residual(&phi, psi, probes, LaplacianKind::Hyperbolic, &ctx.cfg.diff())
        });
        vec![ctx.row(
            EXP,
            "hyperbolic_laplacian_intertwining",
            n,
            None,
            &format!("{p} phi=x_n^2"),
            value,
        )]
    };
    let p = param;
    let prime = move || {
        let value = over_transforms(ctx, n, |psi, probes| {
            let phi = field(n, move |x: &Point| Multivector::scalar(n, x.xn()));
            laplacian_covariance_residual(&phi, psi, probes, LaplacianKind::Prime, &ctx.cfg.diff())
        });
        vec![ctx.row(
            EXP,
            "prime_laplacian_intertwining",
            n,
            None,
            &format!("{p} phi=x_n"),
            value,
        )]
    };
    let cauchy = move || {
        let order = CAUCHY_ORDER.min(surface_cap(n));
        let count = CAUCHY_TRANSFORMS.min(ctx.cfg.probes.transforms);
        let value = (|| -> Measured {
            let f = PowerFunction::new(n, -1)?;
            let v = Point::new((0..n).map(|k| if k == n - 1 { 1.0 } else { 0.1 * (k + 1) as f64 }));
            worst(transforms(ctx, n)?.iter().take(count).map(|psi| {
                // The ball is centred at ψ(v), so v is inside its preimage.
                let u = psi.apply(&v)?;
                let (got, want) = transformed_cauchy(&f, psi, &u, 0.3 * u.xn(), order, &v)?;
                Ok(rel_err(&got, &want))
            }))
        })();
        let param = format!("transforms={count} f=-v^-1 e1");
        vec![ctx.row(EXP, "transformed_cauchy", n, Some(order), &param, value)]
    };
    vec![
        task(pullback),
        task(intertwining),
        task(hyperbolic),
        task(prime),
        task(cauchy),
    ]
}
