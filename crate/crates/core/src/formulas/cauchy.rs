//! Cauchy and Borel-Pompeiu reconstructions.

use num_traits::Float;

use super::eval_field;
use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use crate::error::Result;
use crate::kernels::KernelConfig;
use crate::quadrature::{integrate_surface, integrate_volume, SurfaceRule, VolumeRule};

/// Targets must stay this many node spacings away from the nodes.
pub(crate) const CLEARANCE: f64 = 3.0;

fn height_power(y: &Point) -> f64 {
    y.xn().powi(y.dim() as i32 - 2)
}

/// `∮ (E n f - F n̂ f̂)` without prefactor or clearance check.
pub(crate) fn ef_surface<F: CliffordField + ?Sized>(
    f: &F,
    rule: &SurfaceRule,
    y: &Point,
    cfg: &KernelConfig,
) -> Result<Multivector> {
    integrate_surface(rule, |_, x, nu| {
        let fx = eval_field(f, x)?;
        let (e, ff) = cfg.e_f_kernels(x, y)?;
        let nm = nu.to_multivector();
        Ok(&(&e * &nm) * &fx - &(&ff * &nm.hat()) * &fx.hat())
    })
}

/// `∫ (E g - F ĝ)` over a volume rule.
pub(crate) fn ef_volume<G: CliffordField + ?Sized>(
    g: &G,
    rule: &VolumeRule,
    y: &Point,
    cfg: &KernelConfig,
) -> Result<Multivector> {
    integrate_volume(rule, |_, x| {
        let gx = eval_field(g, x)?;
        let (e, ff) = cfg.e_f_kernels(x, y)?;
        Ok(&e * &gx - &ff * &gx.hat())
    })
}

fn p_surface<F: CliffordField + ?Sized>(f: &F, rule: &SurfaceRule, y: &Point) -> Result<Multivector> {
    let cfg = KernelConfig::default();
    let m = y.dim() as i32 - 2;
    integrate_surface(rule, |_, x, nu| {
        let fx = eval_field(f, x)?;
        let p = cfg.p_kernel(x, y)?;
        Ok((&(&p * &nu.to_multivector()) * &fx).scale(x.xn().powi(-m)))
    })
}

/// `P(f(y)) ≈ κ P(∮ p(x, y) n(x) f(x) x_n^{2-n} dσ)` for hypermonogenic `f`.
pub fn cauchy_p<F: CliffordField + ?Sized>(f: &F, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<Multivector> {
    y.require_upper()?;
    rule.check_clearance(y, CLEARANCE)?;
    Ok(p_surface(f, rule, y)?.p_part().scale(kappa))
}

/// `f(y) ≈ κ y_n^{n-2} ∮ (E n f - F n̂ f̂) dσ` for hypermonogenic `f`.
pub fn cauchy_full<F: CliffordField + ?Sized>(f: &F, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<Multivector> {
    y.require_upper()?;
    rule.check_clearance(y, CLEARANCE)?;
    let s = ef_surface(f, rule, y, &KernelConfig::default())?;
    Ok(s.scale(kappa * height_power(y)))
}

fn q_surface<F: CliffordField + ?Sized>(f: &F, rule: &SurfaceRule, y: &Point) -> Result<Multivector> {
    let cfg = KernelConfig::default();
    integrate_surface(rule, |_, x, nu| {
        let fx = eval_field(f, x)?;
        Ok(&(&cfg.q_kernel(x, y)? * &nu.to_multivector()) * &fx)
    })
}

/// `Q(f(y)) ≈ κ y_n^{n-2} Q(∮ q n f dσ)` for hypermonogenic `f`.
pub fn cauchy_q<F: CliffordField + ?Sized>(f: &F, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<Multivector> {
    y.require_upper()?;
    rule.check_clearance(y, CLEARANCE)?;
    Ok(q_surface(f, rule, y)?.q_part().scale(kappa * height_power(y)))
}

/// `Q(φ(y)) ≈ κ y_n^{n-2} Q(∮ q n φ dσ - ∫ q Mφ dx)` for any smooth `φ`.
///
/// `m_phi` supplies `Mφ`; `volume` should be singularity-adapted at `y`.
pub fn cauchy_q_with_volume<F, G>(
    phi: &F,
    m_phi: &G,
    surface: &SurfaceRule,
    volume: &VolumeRule,
    y: &Point,
    kappa: f64,
) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    y.require_upper()?;
    surface.check_clearance(y, CLEARANCE)?;
    let cfg = KernelConfig::default();
    let s = q_surface(phi, surface, y)?;
    let v = integrate_volume(volume, |_, x| Ok(&cfg.q_kernel(x, y)? * &eval_field(m_phi, x)?))?;
    Ok((s - v).q_part().scale(kappa * height_power(y)))
}

/// `f(y) ≈ κ y_n^{n-2} [∮ (E n f - F n̂ f̂) dσ - ∫ (E Mf - F (Mf)^) dx]`.
pub fn borel_pompeiu<F, G>(
    f: &F,
    m_f: &G,
    surface: &SurfaceRule,
    volume: &VolumeRule,
    y: &Point,
    kappa: f64,
) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    y.require_upper()?;
    surface.check_clearance(y, CLEARANCE)?;
    let cfg = KernelConfig::default();
    let s = ef_surface(f, surface, y, &cfg)?;
    let v = ef_volume(m_f, volume, y, &cfg)?;
    Ok((s - v).scale(kappa * height_power(y)))
}

/// `P(f(y)) ≈ κ P(∮ p n f x_n^{2-n} dσ - ∫ p Mf x_n^{2-n} dx)`.
pub fn borel_pompeiu_p<F, G>(
    f: &F,
    m_f: &G,
    surface: &SurfaceRule,
    volume: &VolumeRule,
    y: &Point,
    kappa: f64,
) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    y.require_upper()?;
    surface.check_clearance(y, CLEARANCE)?;
    let cfg = KernelConfig::default();
    let m = y.dim() as i32 - 2;
    let s = p_surface(f, surface, y)?;
    let v = integrate_volume(volume, |_, x| {
        Ok((&cfg.p_kernel(x, y)? * &eval_field(m_f, x)?).scale(x.xn().powi(-m)))
    })?;
    Ok((s - v).p_part().scale(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{field, DerivedField, DiffConfig, Operator};
    use crate::formulas::FormulaId;
    use crate::quadrature::{ball_rule_about, sphere_rule, RegionSpec};

    fn ball(n: usize) -> RegionSpec {
        let mut c = Point::zeros(n);
        c.coords_mut()[n - 1] = 2.0;
        RegionSpec::sphere(c, 0.5).unwrap()
    }

    fn probe(n: usize) -> Point {
        let mut y = Point::zeros(n);
        y.coords_mut()[0] = 0.1;
        y.coords_mut()[n - 1] = 2.15;
        y
    }

    // -v^{-1} e1 is hypermonogenic with nonzero P and Q parts.
    fn inverse_field(n: usize) -> impl CliffordField {
        field(n, move |x: &Point| {
            -(&x.vector_inverse().unwrap() * &Multivector::e(n, 1))
        })
    }

    #[test]
    fn cauchy_full_reproduces_hypermonogenic_function() {
        for n in 3..=5 {
            let rule = sphere_rule(&ball(n), 24).unwrap();
            let y = probe(n);
            let f = inverse_field(n);
            let got = cauchy_full(&f, &rule, &y, FormulaId::CauchyFull.reference_constant(n)).unwrap();
            let want = f.eval(&y);
            assert!((&got - &want).norm() < 1e-9 * want.norm(), "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn cauchy_p_and_q_reproduce_their_parts() {
        for n in 3..=4 {
            let rule = sphere_rule(&ball(n), 24).unwrap();
            let y = probe(n);
            let f = inverse_field(n);
            let want = f.eval(&y);
            let p = cauchy_p(&f, &rule, &y, FormulaId::CauchyP.reference_constant(n)).unwrap();
            let q = cauchy_q(&f, &rule, &y, FormulaId::CauchyQ.reference_constant(n)).unwrap();
            assert!((&p - &want.p_part()).norm() < 1e-9, "n={n}: {p}");
            assert!((&q - &want.q_part()).norm() < 1e-9, "n={n}: {q}");
        }
    }

    #[test]
    fn exterior_targets_give_zero() {
        let n = 3;
        let rule = sphere_rule(&ball(n), 24).unwrap();
        let f = inverse_field(n);
        let y = Point::from_slice(&[0.9, 0.2, 1.7]);
        let got = cauchy_full(&f, &rule, &y, FormulaId::CauchyFull.reference_constant(n)).unwrap();
        assert!(got.norm() < 1e-10, "{got}");
    }

    #[test]
    fn near_surface_target_is_refused() {
        let n = 3;
        let rule = sphere_rule(&ball(n), 12).unwrap();
        let y = Point::from_slice(&[0.0, 0.0, 2.49]);
        let f = inverse_field(n);
        assert!(matches!(
            cauchy_full(&f, &rule, &y, 1.0),
            Err(crate::Error::TooCloseToSurface { .. })
        ));
    }

    #[test]
    fn borel_pompeiu_reproduces_non_hypermonogenic_function() {
        for n in 3..=4 {
            let spec = ball(n);
            let y = probe(n);
            let surface = sphere_rule(&spec, 24).unwrap();
            let volume = ball_rule_about(&spec, &y, 24).unwrap();
            // f = x_n e1, Mf = e_n e1.
            let f = field(n, move |x: &Point| Multivector::e(n, 1).scale(x.xn()));
            let mf = field(n, move |_: &Point| &Multivector::e(n, n) * &Multivector::e(n, 1));
            let k = FormulaId::BorelPompeiu.reference_constant(n);
            let got = borel_pompeiu(&f, &mf, &surface, &volume, &y, k).unwrap();
            let want = f.eval(&y);
            assert!((&got - &want).norm() < 1e-8, "n={n}: {got} vs {want}");
            // Same with Mf by finite differences.
            let mfd = DerivedField::new(&f, Operator::DiracHodge, DiffConfig::default());
            let got = borel_pompeiu(&f, &mfd, &surface, &volume, &y, k).unwrap();
            assert!((&got - &want).norm() < 1e-7, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn p_part_borel_pompeiu_needs_subtracted_volume_term() {
        let n = 3;
        let spec = ball(n);
        let y = probe(n);
        let surface = sphere_rule(&spec, 24).unwrap();
        let volume = ball_rule_about(&spec, &y, 24).unwrap();
        // x_1 e_n: P part is zero, Mf has a nonzero scalar part.
        let f = field(n, move |x: &Point| {
            Multivector::e(n, 1).scale(x[0] * x.xn()) + Multivector::e(n, 2).scale(x[1])
        });
        let mf = DerivedField::new(&f, Operator::DiracHodge, DiffConfig::default());
        let k = FormulaId::CauchyP.reference_constant(n);
        let got = borel_pompeiu_p(&f, &mf, &surface, &volume, &y, k).unwrap();
        let want = f.eval(&y).p_part();
        assert!((&got - &want).norm() < 1e-7, "{got} vs {want}");
    }

    #[test]
    fn q_formula_with_volume_term() {
        let n = 3;
        let spec = ball(n);
        let y = probe(n);
        let surface = sphere_rule(&spec, 24).unwrap();
        let volume = ball_rule_about(&spec, &y, 24).unwrap();
        let f = field(n, move |x: &Point| {
            Multivector::e(n, n).scale(1.0 + x[0] * x[0]) + Multivector::e(n, 1)
        });
        let mf = DerivedField::new(&f, Operator::DiracHodge, DiffConfig::default());
        let k = FormulaId::CauchyQ.reference_constant(n);
        let got = cauchy_q_with_volume(&f, &mf, &surface, &volume, &y, k).unwrap();
        let want = f.eval(&y).q_part();
        assert!((&got - &want).norm() < 1e-7, "{got} vs {want}");
    }
}
