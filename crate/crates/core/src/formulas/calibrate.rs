//! Measure each formula's constant from exact solutions.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Float;

use super::{
    borel_pompeiu, cauchy_full, cauchy_p, cauchy_q, greens_hyperbolic, greens_prime, poisson_mass, poisson_rule,
    FormulaId,
};
use crate::calculus::field;
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::quadrature::{ball_rule_about, sphere_rule, RegionSpec};

/// Label used when no printed constant matches.
pub const NO_MATCH: &str = "none of the printed variants";

/// Calibration settings.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationSettings {
    pub order: usize,
    /// Height of the sphere centres.
    pub height: f64,
    pub radii: Vec<f64>,
    /// Probe offsets from the centre, as fractions of the radius.
    pub probe_fractions: Vec<f64>,
    /// Largest accepted `spread / κ`.
    pub max_spread: f64,
    /// Relative distance at which a printed constant counts as matching.
    pub match_tolerance: f64,
}

impl Default for CalibrationSettings {
    fn default() -> Self {
        CalibrationSettings {
            order: 32,
            height: 2.0,
            radii: alloc::vec![0.5, 0.3],
            probe_fractions: alloc::vec![0.0, 0.2, 0.3, 0.4, 0.5],
            max_spread: 1e-6,
            match_tolerance: 1e-5,
        }
    }
}

/// Outcome of [`calibrate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationResult {
    pub formula: FormulaId,
    pub n: usize,
    pub kappa_measured: f64,
    pub kappa_reference: f64,
    pub candidates: Vec<(String, f64)>,
    pub best_match: String,
    /// `max_i |κ_i - κ| / |κ|` over probes.
    pub spread: f64,
    pub probes: usize,
}

/// [`calibrate_with`] and default settings.
pub fn calibrate(formula: FormulaId, n: usize) -> Result<CalibrationResult> {
    calibrate_with(formula, n, &CalibrationSettings::default())
}

fn dot(a: &Multivector, b: &Multivector) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum()
}

fn probe_points(n: usize, center: &Point, radius: f64, fractions: &[f64]) -> Vec<Point> {
    fractions
        .iter()
        .enumerate()
        .map(|(i, f)| {
            // Directions cycle through ±e_k and a diagonal.
            let mut d = Point::zeros(n);
            match i % 4 {
                0 => d.coords_mut()[n - 1] = 1.0,
                1 => d.coords_mut()[0] = 1.0,
                2 => d.coords_mut()[n - 1] = -1.0,
                _ => {
                    for k in 0..n {
                        d.coords_mut()[k] = if k % 2 == 0 { 1.0 } else { -1.0 };
                    }
                }
            }
            let d = d.scale(1.0 / d.norm());
            center.offset(&d, f * radius)
        })
        .collect()
}

/// `(raw value at κ = 1, exact value)` for one probe.
fn sample(
    formula: FormulaId,
    n: usize,
    spec: &RegionSpec,
    order: usize,
    y: &Point,
) -> Result<(Multivector, Multivector)> {
    let e1 = Multivector::e(n, 1);
    let en = Multivector::e(n, n);
    let constant = e1.clone() + Multivector::blade(n, 0b11, 0.5) + Multivector::scalar(n, 0.25);
    match formula {
        FormulaId::CauchyP | FormulaId::CauchyFull => {
            let rule = sphere_rule(spec, order)?;
            let c = constant.clone();
            let f = field(n, move |_: &Point| c.clone());
            let raw = if formula == FormulaId::CauchyP {
                cauchy_p(&f, &rule, y, 1.0)?
            } else {
                cauchy_full(&f, &rule, y, 1.0)?
            };
            let want = if formula == FormulaId::CauchyP {
                constant.p_part()
            } else {
                constant
            };
            Ok((raw, want))
        }
        FormulaId::CauchyQ => {
            let rule = sphere_rule(spec, order)?;
            let f = field(n, move |x: &Point| {
                super::power_function(-1, x).unwrap_or_else(|_| Multivector::scalar(n, f64::NAN))
            });
            let want = crate::calculus::CliffordField::eval(&f, y).q_part();
            Ok((cauchy_q(&f, &rule, y, 1.0)?, want))
        }
        FormulaId::GreensHyperbolic => {
            let rule = sphere_rule(spec, order)?;
            let m = n as i32;
            let h = field(n, move |x: &Point| Multivector::scalar(n, x.xn().powi(m - 1)));
            let mh = field(n, move |x: &Point| {
                Multivector::e(n, n).scale((m - 1) as f64 * x.xn().powi(m - 2))
            });
            let want = Multivector::scalar(n, y.xn().powi(m - 1));
            Ok((greens_hyperbolic(&h, &mh, &rule, y, 1.0)?, want))
        }
        FormulaId::GreensPrime => {
            let rule = sphere_rule(spec, order)?;
            let u = field(n, move |x: &Point| Multivector::e(n, n).scale(x.xn()));
            let mu = field(n, move |_: &Point| Multivector::scalar(n, n as f64 - 3.0));
            Ok((greens_prime(&u, &mu, &rule, y, 1.0)?, en.scale(y.xn())))
        }
        FormulaId::BorelPompeiu => {
            let rule = sphere_rule(spec, order)?;
            let vol = ball_rule_about(spec, y, order)?;
            let f = field(n, move |x: &Point| Multivector::e(n, 1).scale(x.xn()));
            let enm = en.clone();
            let mf = field(n, move |_: &Point| &enm * &Multivector::e(n, 1));
            Ok((borel_pompeiu(&f, &mf, &rule, &vol, y, 1.0)?, e1.scale(y.xn())))
        }
        FormulaId::Poisson => {
            let rule = poisson_rule(y, order, 4)?;
            Ok((
                Multivector::scalar(n, poisson_mass(&rule, y, 1.0)?),
                Multivector::one(n),
            ))
        }
    }
}

/// Measure `κ` for `formula` in dimension `n`.
///
/// For every probe the required constant is the least-squares ratio
/// `<raw, exact> / <raw, raw>`; the reported `κ` is the pooled ratio and the
/// spread the largest relative deviation of a single probe from it.
pub fn calibrate_with(formula: FormulaId, n: usize, settings: &CalibrationSettings) -> Result<CalibrationResult> {
    crate::clifford::check_dim(n)?;
    if settings.radii.len() < 2 || settings.probe_fractions.len() < 5 {
        return Err(Error::Domain("calibration needs at least 2 radii and 5 probes"));
    }
    let mut center = Point::zeros(n);
    center.coords_mut()[n - 1] = settings.height;
    let (mut num, mut den) = (0.0, 0.0);
    let mut ratios = Vec::new();
    for &r in &settings.radii {
        let spec = RegionSpec::sphere(center.clone(), r)?;
        for y in probe_points(n, &center, r, &settings.probe_fractions) {
            let (raw, want) = sample(formula, n, &spec, settings.order, &y)?;
            let rr = dot(&raw, &raw);
            if !(rr > 0.0) {
                return Err(Error::Domain("calibration integral vanished"));
            }
            num += dot(&raw, &want);
            den += rr;
            ratios.push(dot(&raw, &want) / rr);
        }
    }
    let kappa = num / den;
    let spread = ratios
        .iter()
        .map(|k| (k - kappa).abs() / kappa.abs())
        .fold(0.0, f64::max);
    if !(spread <= settings.max_spread) {
        return Err(Error::CalibrationUnstable { spread });
    }
    let candidates: Vec<(String, f64)> = formula
        .printed_candidates(n)
        .into_iter()
        .map(|(l, v)| (l.to_string(), v))
        .collect();
    let best_match = candidates
        .iter()
        .find(|(_, v)| ((v - kappa) / kappa).abs() <= settings.match_tolerance)
        .map(|(l, _)| l.clone())
        .unwrap_or_else(|| NO_MATCH.to_string());
    Ok(CalibrationResult {
        formula,
        n,
        kappa_measured: kappa,
        kappa_reference: formula.reference_constant(n),
        candidates,
        best_match,
        spread,
        probes: ratios.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_cauchy_constant_is_stable_and_matches_reference() {
        let r = calibrate(FormulaId::CauchyFull, 3).unwrap();
        assert!(r.spread <= 1e-6);
        assert!((r.kappa_measured / r.kappa_reference - 1.0).abs() < 1e-8, "{r:?}");
        assert!(r.best_match.starts_with("2^(n-2)"), "{}", r.best_match);
    }

    #[test]
    fn poisson_constant_gives_unit_mass() {
        let r = calibrate(FormulaId::Poisson, 3).unwrap();
        assert!((r.kappa_measured / r.kappa_reference - 1.0).abs() < 1e-10, "{r:?}");
    }
}
