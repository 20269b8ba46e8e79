//! Cauchy, Borel-Pompeiu and Green reconstructions on the test ball, and their
//! convergence in the quadrature order.

use hypclif_core::calculus::field;
use hypclif_core::formulas::{
    borel_pompeiu, borel_pompeiu_p, cauchy_full, cauchy_p, cauchy_q, greens_hyperbolic, greens_prime,
    greens_prime_with_volume, power_function, FormulaId,
};
use hypclif_core::quadrature::{ball_rule, ball_rule_about, sphere_rule};
use hypclif_core::{CliffordField, Multivector, Point, SurfaceRule};

use super::{along, direction, rel_err, task, volume_cap, worst, Ctx, Measured, Task};
use crate::config::Experiment;
use crate::report::Row;

/// `|got - part|` relative to the whole value, absolute where it vanishes.
fn part_err(got: &Multivector, part: &Multivector, whole: &Multivector) -> f64 {
    let d = (got - part).norm();
    let s = whole.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

fn kappa(id: FormulaId, n: usize) -> f64 {
    id.reference_constant(n)
}

/// Interior probes: the centre and three points at `0.3 R`.
fn interior_probes(ctx: &Ctx, n: usize) -> Vec<Point> {
    let c = ctx.center(n);
    let t = 0.3 * ctx.radius();
    vec![
        c.clone(),
        along(&c, &direction(n, 1.0, 0.0, 0.0), t),
        along(&c, &direction(n, 0.0, 0.0, -1.0), t),
        along(&c, &direction(n, 1.0, -1.0, 1.0), t),
    ]
}

fn exterior_probes(ctx: &Ctx, n: usize) -> Vec<Point> {
    let c = ctx.center(n);
    let r = ctx.radius();
    vec![
        along(&c, &direction(n, 1.0, 0.0, 0.0), 3.0 * r),
        along(&c, &direction(n, 0.0, 1.0, 1.0), 2.6 * r),
    ]
}

fn constant(n: usize) -> Multivector {
    Multivector::e(n, 1) + Multivector::blade(n, 0b11, 0.5) + Multivector::scalar(n, 0.25)
}

/// `-v^{-1} e_1`, the inversion image of the constant `e_1`.
fn inversion_image(n: usize) -> impl CliffordField {
    field(n, move |v: &Point| {
        power_function(-1, v).unwrap_or_else(|_| Multivector::scalar(n, f64::NAN))
    })
}

fn surface(ctx: &Ctx, n: usize, order: usize) -> Result<SurfaceRule, hypclif_core::Error> {
    sphere_rule(&ctx.ball(n), order)
}

// ---------------------------------------------------------------- cauchy

pub(super) fn cauchy_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    ctx.surface_orders(n)
        .into_iter()
        .map(|order| task(move || cauchy_rows(ctx, n, order)))
        .collect()
}

pub(super) fn full_inversion_image(ctx: &Ctx, n: usize, order: usize) -> Measured {
    let rule = surface(ctx, n, order)?;
    let f = inversion_image(n);
    worst(interior_probes(ctx, n).iter().map(|y| {
        let got = cauchy_full(&f, &rule, y, kappa(FormulaId::CauchyFull, n))?;
        Ok(rel_err(&got, &f.eval(y)))
    }))
}

fn cauchy_rows(ctx: &Ctx, n: usize, order: usize) -> Vec<Row> {
    const EXP: Experiment = Experiment::Cauchy;
    let probes = interior_probes(ctx, n);
    let f = inversion_image(n);
    let c = constant(n);
    let cf = {
        let c = c.clone();
        field(n, move |_: &Point| c.clone())
    };
    let over = |g: &dyn Fn(&SurfaceRule, &Point) -> Measured| -> Measured {
        let rule = surface(ctx, n, order)?;
        worst(probes.iter().map(|y| g(&rule, y)))
    };
    let full_constant = over(&|rule, y| {
        Ok(rel_err(
            &cauchy_full(&cf, rule, y, kappa(FormulaId::CauchyFull, n))?,
            &c,
        ))
    });
    let p_part = over(&|rule, y| {
        let got = cauchy_p(&f, rule, y, kappa(FormulaId::CauchyP, n))?;
        Ok(part_err(&got, &f.eval(y).p_part(), &f.eval(y)))
    });
    let q_part = over(&|rule, y| {
        let got = cauchy_q(&f, rule, y, kappa(FormulaId::CauchyQ, n))?;
        Ok(part_err(&got, &f.eval(y).q_part(), &f.eval(y)))
    });
    let exterior = (|| -> Measured {
        let rule = surface(ctx, n, order)?;
        let scale = rule.nodes().iter().map(|x| f.eval(x).norm()).fold(0.0, f64::max);
        worst(
            exterior_probes(ctx, n)
                .iter()
                .map(|y| Ok(cauchy_full(&f, &rule, y, kappa(FormulaId::CauchyFull, n))?.norm() / scale)),
        )
    })();
    let param = format!("probes={} f=-v^-1 e1", probes.len());
    vec![
        ctx.row(EXP, "full_constant", n, Some(order), "f=e1+e12/2+1/4", full_constant),
        ctx.row(
            EXP,
            "full_inversion_image",
            n,
            Some(order),
            &param,
            full_inversion_image(ctx, n, order),
        ),
        ctx.row(EXP, "p_part", n, Some(order), &param, p_part),
        ctx.row(EXP, "q_part", n, Some(order), &param, q_part),
        ctx.row(
            EXP,
            "exterior_vanishes",
            n,
            Some(order),
            "probes=2 f=-v^-1 e1",
            exterior,
        ),
    ]
}

// --------------------------------------------------------- borel-pompeiu

pub(super) fn borel_pompeiu_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    ctx.surface_orders(n)
        .into_iter()
        .map(|order| task(move || borel_pompeiu_rows(ctx, n, order)))
        .collect()
}

type BoxedField = Box<dyn CliffordField + Send + Sync>;

/// `(f, Mf)` pairs that are not hypermonogenic: `x_n e_1` and `x_1²`.
fn bp_cases(n: usize) -> Vec<(BoxedField, BoxedField)> {
    let en_e1 = &Multivector::e(n, n) * &Multivector::e(n, 1);
    vec![
        (
            Box::new(field(n, move |x: &Point| Multivector::e(n, 1).scale(x.xn()))),
            Box::new(field(n, move |_: &Point| en_e1.clone())),
        ),
        (
            Box::new(field(n, move |x: &Point| Multivector::scalar(n, x[0] * x[0]))),
            Box::new(field(n, move |x: &Point| Multivector::e(n, 1).scale(2.0 * x[0]))),
        ),
    ]
}

pub(super) fn borel_pompeiu_error(ctx: &Ctx, n: usize, order: usize, p_only: bool) -> Measured {
    let rule = surface(ctx, n, order)?;
    let vol_order = order.min(volume_cap(n));
    let probes = &interior_probes(ctx, n)[..2];
    let cases = bp_cases(n);
    worst(probes.iter().flat_map(|y| {
        let rule = &rule;
        cases.iter().map(move |(f, mf)| {
            let vol = ball_rule_about(&ctx.ball(n), y, vol_order)?;
            let want = f.eval(y);
            Ok(if p_only {
                let got = borel_pompeiu_p(f, mf, rule, &vol, y, kappa(FormulaId::CauchyP, n))?;
                part_err(&got, &want.p_part(), &want)
            } else {
                rel_err(
                    &borel_pompeiu(f, mf, rule, &vol, y, kappa(FormulaId::BorelPompeiu, n))?,
                    &want,
                )
            })
        })
    }))
}

fn borel_pompeiu_rows(ctx: &Ctx, n: usize, order: usize) -> Vec<Row> {
    const EXP: Experiment = Experiment::BorelPompeiu;
    let param = format!(
        "probes=2 f in {{x_n e1, x1^2}} volume-order={}",
        order.min(volume_cap(n))
    );
    vec![
        ctx.row(
            EXP,
            "full",
            n,
            Some(order),
            &param,
            borel_pompeiu_error(ctx, n, order, false),
        ),
        ctx.row(
            EXP,
            "p_part",
            n,
            Some(order),
            &param,
            borel_pompeiu_error(ctx, n, order, true),
        ),
    ]
}

// ----------------------------------------------------------------- green

pub(super) fn green_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    ctx.surface_orders(n)
        .into_iter()
        .map(|order| task(move || green_rows(ctx, n, order)))
        .collect()
}

fn green_probe(ctx: &Ctx, n: usize) -> Point {
    along(&ctx.center(n), &direction(n, -1.0, 0.0, -1.0), 0.28 * ctx.radius())
}

pub(super) fn hyperbolic_green_error(ctx: &Ctx, n: usize, order: usize, case: usize) -> Measured {
    let rule = surface(ctx, n, order)?;
    let y = green_probe(ctx, n);
    let m = n as i32;
    let k = kappa(FormulaId::GreensHyperbolic, n);
    let scalar = move |f: fn(&Point, i32) -> f64| field(n, move |x: &Point| Multivector::scalar(n, f(x, m)));
    let (h, mh): (Box<dyn CliffordField>, Box<dyn CliffordField>) = match case {
        0 => (
            Box::new(scalar(|_, _| 1.0)),
            Box::new(field(n, move |_: &Point| Multivector::zero(n))),
        ),
        1 => (
            Box::new(scalar(|x, _| x[0])),
            Box::new(field(n, move |_: &Point| Multivector::e(n, 1))),
        ),
        _ => (
            Box::new(scalar(|x, m| x.xn().powi(m - 1))),
            Box::new(field(n, move |x: &Point| {
                Multivector::e(n, n).scale((m - 1) as f64 * x.xn().powi(m - 2))
            })),
        ),
    };
    Ok(rel_err(&greens_hyperbolic(&h, &mh, &rule, &y, k)?, &h.eval(&y)))
}

fn green_rows(ctx: &Ctx, n: usize, order: usize) -> Vec<Row> {
    const EXP: Experiment = Experiment::Green;
    let y = green_probe(ctx, n);
    let k = kappa(FormulaId::GreensPrime, n);
    let nf = n as f64;
    let prime = (|| -> Measured {
        let rule = surface(ctx, n, order)?;
        let u = field(n, move |x: &Point| Multivector::e(n, n).scale(x.xn()));
        let mu = field(n, move |_: &Point| Multivector::scalar(n, nf - 3.0));
        Ok(rel_err(&greens_prime(&u, &mu, &rule, &y, k)?, &u.eval(&y)))
    })();
    let vol_order = order.min(volume_cap(n));
    let with_volume = (|| -> Measured {
        let rule = surface(ctx, n, order)?;
        let vol = ball_rule_about(&ctx.ball(n), &y, vol_order)?;
        let u = field(n, move |_: &Point| Multivector::e(n, n));
        let mu = field(n, move |x: &Point| Multivector::scalar(n, (nf - 2.0) / x.xn()));
        let lap = field(n, move |x: &Point| {
            Multivector::e(n, n).scale((nf - 2.0) / (x.xn() * x.xn()))
        });
        Ok(rel_err(
            &greens_prime_with_volume(&u, &mu, &lap, &rule, &vol, &y, k)?,
            &u.eval(&y),
        ))
    })();
    vec![
        ctx.row(
            EXP,
            "hyperbolic_one",
            n,
            Some(order),
            "h=1",
            hyperbolic_green_error(ctx, n, order, 0),
        ),
        ctx.row(
            EXP,
            "hyperbolic_x1",
            n,
            Some(order),
            "h=x1",
            hyperbolic_green_error(ctx, n, order, 1),
        ),
        ctx.row(
            EXP,
            "hyperbolic_xn_power",
            n,
            Some(order),
            "h=x_n^(n-1)",
            hyperbolic_green_error(ctx, n, order, 2),
        ),
        ctx.row(EXP, "prime_xn_en", n, Some(order), "u=x_n e_n", prime),
        ctx.row(
            EXP,
            "prime_en_with_volume",
            n,
            Some(order),
            &format!("u=e_n volume-order={vol_order}"),
            with_volume,
        ),
    ]
}

// ----------------------------------------------------------- convergence

/// Residuals below this are at the floating-point floor; their ratios carry
/// no information.
const FLOOR: f64 = 1e-13;

/// Interior values are exact to rounding already at low order, so the
/// convergence study uses exterior targets, where each formula must return
/// zero and the integrand is smooth but not polynomial.
fn exterior_target(ctx: &Ctx, n: usize) -> Point {
    along(&ctx.center(n), &direction(n, 1.0, 0.0, 1.0), 1.8 * ctx.radius())
}

fn exterior_cauchy(ctx: &Ctx, n: usize, order: usize) -> Measured {
    let rule = surface(ctx, n, order)?;
    let f = inversion_image(n);
    let y = exterior_target(ctx, n);
    Ok(cauchy_full(&f, &rule, &y, kappa(FormulaId::CauchyFull, n))?.norm() / f.eval(&ctx.center(n)).norm())
}

fn exterior_borel_pompeiu(ctx: &Ctx, n: usize, order: usize) -> Measured {
    let rule = surface(ctx, n, order)?;
    let vol = ball_rule(&ctx.ball(n), order.min(volume_cap(n)))?;
    let y = exterior_target(ctx, n);
    let (f, mf) = bp_cases(n).remove(0);
    Ok(
        borel_pompeiu(&f, &mf, &rule, &vol, &y, kappa(FormulaId::BorelPompeiu, n))?.norm()
            / f.eval(&ctx.center(n)).norm(),
    )
}

fn exterior_green(ctx: &Ctx, n: usize, order: usize) -> Measured {
    let rule = surface(ctx, n, order)?;
    let y = exterior_target(ctx, n);
    let m = n as i32;
    let h = field(n, move |x: &Point| Multivector::scalar(n, x.xn().powi(m - 1)));
    let mh = field(n, move |x: &Point| {
        Multivector::e(n, n).scale((m - 1) as f64 * x.xn().powi(m - 2))
    });
    let k = kappa(FormulaId::GreensHyperbolic, n);
    Ok(greens_hyperbolic(&h, &mh, &rule, &y, k)?.norm() / h.eval(&ctx.center(n)).norm())
}

pub(super) fn convergence_tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    vec![
        task(move || convergence_rows(ctx, n, "cauchy_full_ratio", exterior_cauchy)),
        task(move || convergence_rows(ctx, n, "borel_pompeiu_ratio", exterior_borel_pompeiu)),
        task(move || convergence_rows(ctx, n, "greens_hyperbolic_ratio", exterior_green)),
    ]
}

/// The capped orders; when capping leaves a single order `o`, the ladder is
/// `(3o/4, o)` so there is still a ratio to report.
fn convergence_orders(ctx: &Ctx, n: usize) -> Vec<usize> {
    let mut orders = ctx.surface_orders(n);
    if orders.len() == 1 {
        orders.insert(0, orders[0] * 3 / 4);
    }
    orders
}

/// Ratios of consecutive residuals; a residual at the floor counts as
/// converged, so `floor -> floor` reports 1.
fn convergence_rows(ctx: &Ctx, n: usize, check: &str, residual: fn(&Ctx, usize, usize) -> Measured) -> Vec<Row> {
    const EXP: Experiment = Experiment::Convergence;
    let orders = convergence_orders(ctx, n);
    let residuals: Vec<Measured> = orders.iter().map(|&o| residual(ctx, n, o)).collect();
    orders
        .windows(2)
        .zip(residuals.windows(2))
        .map(|(o, r)| {
            let value = match (&r[0], &r[1]) {
                (Ok(a), Ok(b)) if *b <= FLOOR => Ok(if *a <= FLOOR { 1.0 } else { b.max(FLOOR) / a }),
                (Ok(a), Ok(b)) => Ok(b / a.max(FLOOR)),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            let shown = |m: &Measured| m.as_ref().map_or_else(|_| "error".to_string(), |v| format!("{v:.3e}"));
            let param = format!(
                "exterior target; order {}->{}: {} -> {}",
                o[0],
                o[1],
                shown(&r[0]),
                shown(&r[1])
            );
            ctx.row(EXP, check, n, Some(o[1]), &param, value)
        })
        .collect()
}
