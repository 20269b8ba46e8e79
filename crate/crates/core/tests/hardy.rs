//! Hardy projections on a sphere.

use hypclif_core::calculus::field;
use hypclif_core::formulas::{hardy_project, power_function, HardyField, PlemeljConfig, Sphere};
use hypclif_core::{Multivector, Point};

fn sphere() -> Sphere {
    Sphere::new(Point::from_slice(&[0.0, 0.0, 2.0]), 0.5).unwrap()
}

fn probes() -> Vec<Point> {
    let c = Point::from_slice(&[0.0, 0.0, 2.0]);
    [[0.6, 0.0, 0.8]]
        .iter()
        .map(|d| c.offset(&Point::from_slice(d), 0.5))
        .collect()
}

fn density(x: &Point) -> Multivector {
    Multivector::scalar(3, x[0] * x[1]) + Multivector::e(3, 1).scale(x.xn()) + Multivector::e(3, 3).scale(0.3 * x[1])
}

fn max_gap(a: &[Multivector], b: &[Multivector]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn cfg() -> PlemeljConfig {
    PlemeljConfig {
        order: 10,
        ..PlemeljConfig::default()
    }
}

#[test]
fn plus_projection_is_idempotent() {
    let s = sphere();
    let once = HardyField {
        inner: field(3, density),
        sphere: s.clone(),
        sign: 1.0,
        cfg: cfg(),
    };
    let p1 = hardy_project(&once, &s, 1.0, &probes(), &cfg()).unwrap();
    let direct: Vec<Multivector> = probes()
        .iter()
        .map(|y| hypclif_core::CliffordField::eval(&once, y))
        .collect();
    let gap = max_gap(&p1, &direct);
    assert!(gap < 2e-3, "{gap}");
}

#[test]
fn projections_annihilate_each_other() {
    let s = sphere();
    let minus = HardyField {
        inner: field(3, density),
        sphere: s.clone(),
        sign: -1.0,
        cfg: cfg(),
    };
    let out = hardy_project(&minus, &s, 1.0, &probes(), &cfg()).unwrap();
    let worst = out.iter().map(Multivector::norm).fold(0.0, f64::max);
    assert!(worst < 2e-3, "{worst}");
}

#[test]
fn hypermonogenic_trace_is_invariant() {
    let s = sphere();
    let f = field(3, |x: &Point| power_function(-1, x).unwrap());
    let out = hardy_project(&f, &s, 1.0, &probes(), &PlemeljConfig::default()).unwrap();
    let want: Vec<Multivector> = probes().iter().map(|y| power_function(-1, y).unwrap()).collect();
    let gap = max_gap(&out, &want);
    assert!(gap < 1e-3, "{gap}");
}
