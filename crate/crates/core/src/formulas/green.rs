//! Green's formulas for the hyperbolic Laplacian and for `Δ'`.

use num_traits::Float;

use super::cauchy::CLEARANCE;
use super::eval_field;
use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use crate::error::Result;
use crate::kernels::KernelConfig;
use crate::quadrature::{integrate_surface, integrate_volume, SurfaceRule, VolumeRule};

/// `h(y) ≈ κ P(∮ (p n h - G n Mh) x_n^{2-n} dσ)` for hyperbolic harmonic `h`.
pub fn greens_hyperbolic<F, G>(h: &F, m_h: &G, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    y.require_upper()?;
    rule.check_clearance(y, CLEARANCE)?;
    let cfg = KernelConfig::default();
    let m = y.dim() as i32 - 2;
    let s = integrate_surface(rule, |_, x, nu| {
        let nm = nu.to_multivector();
        let p = cfg.p_kernel(x, y)?;
        let g = cfg.green_hyperbolic(x, y)?;
        let term = &(&p * &nm) * &eval_field(h, x)? - (&nm * &eval_field(m_h, x)?).scale(g);
        Ok(term.scale(x.xn().powi(-m)))
    })?;
    Ok(s.p_part().scale(kappa))
}

fn prime_surface<F, G>(u: &F, m_u: &G, rule: &SurfaceRule, y: &Point, cfg: &KernelConfig) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    integrate_surface(rule, |_, x, nu| {
        let nm = nu.to_multivector();
        let q = cfg.q_kernel(x, y)?;
        let hk = cfg.green_prime(x, y)?;
        Ok(&(&q * &nm) * &eval_field(u, x)? - (&nm * &eval_field(m_u, x)?).scale(hk))
    })
}

fn finish_prime(raw: Multivector, y: &Point, kappa: f64) -> Multivector {
    let n = y.dim();
    (&raw.q_part() * &Multivector::e(n, n)).scale(kappa * y.xn().powi(n as i32 - 2))
}

/// `u(y) ≈ κ y_n^{n-2} Q(∮ (q n u - H n Mu) dσ) e_n` for `u` with values in
/// `Cl_{n-1} e_n` and `Δ'u = 0`.
pub fn greens_prime<F, G>(u: &F, m_u: &G, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    y.require_upper()?;
    rule.check_clearance(y, CLEARANCE)?;
    let raw = prime_surface(u, m_u, rule, y, &KernelConfig::default())?;
    Ok(finish_prime(raw, y, kappa))
}

/// [`greens_prime`] for general `C²` `u`: subtracts `∫ H Δ'u dx` inside the
/// `Q(...)`. `lap_u` supplies `Δ'u`; `volume` should be singularity-adapted at `y`.
pub fn greens_prime_with_volume<F, G, L>(
    u: &F,
    m_u: &G,
    lap_u: &L,
    surface: &SurfaceRule,
    volume: &VolumeRule,
    y: &Point,
    kappa: f64,
) -> Result<Multivector>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
    L: CliffordField + ?Sized,
{
    y.require_upper()?;
    surface.check_clearance(y, CLEARANCE)?;
    let cfg = KernelConfig::default();
    let s = prime_surface(u, m_u, surface, y, &cfg)?;
    let v = integrate_volume(volume, |_, x| Ok(eval_field(lap_u, x)?.scale(cfg.green_prime(x, y)?)))?;
    Ok(finish_prime(s - v, y, kappa))
}

/// Real-valued form: `u` scalar with `Δ'u = 0`, `m_enu` supplying `M(e_n u)`.
/// Returns `-e_n` times the reconstruction of `e_n u`.
pub fn greens_prime_real<F, G>(u: &F, m_enu: &G, rule: &SurfaceRule, y: &Point, kappa: f64) -> Result<f64>
where
    F: CliffordField + ?Sized,
    G: CliffordField + ?Sized,
{
    let n = y.dim();
    let en = Multivector::e(n, n);
    let lifted = crate::calculus::field(n, |x: &Point| &en * &u.eval(x));
    let w = greens_prime(&lifted, m_enu, rule, y, kappa)?;
    Ok(-(&en * &w).scalar_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::field;
    use crate::formulas::FormulaId;
    use crate::quadrature::{ball_rule_about, sphere_rule, RegionSpec};

    fn ball(n: usize) -> RegionSpec {
        let mut c = Point::zeros(n);
        c.coords_mut()[n - 1] = 2.0;
        RegionSpec::sphere(c, 0.5).unwrap()
    }

    fn probe(n: usize) -> Point {
        let mut y = Point::zeros(n);
        y.coords_mut()[0] = -0.1;
        y.coords_mut()[n - 1] = 1.9;
        y
    }

    #[test]
    fn hyperbolic_green_reproduces_harmonic_functions() {
        for n in 3..=4 {
            let rule = sphere_rule(&ball(n), 24).unwrap();
            let y = probe(n);
            let k = FormulaId::GreensHyperbolic.reference_constant(n);
            let m = n as i32;
            let cases: [(&dyn Fn(&Point) -> f64, &dyn Fn(&Point) -> Multivector); 3] = [
                (&|_| 1.0, &|_| Multivector::zero(n)),
                (&|x| x[0], &|_| Multivector::e(n, 1)),
                (&|x| x.xn().powi(m - 1), &|x| {
                    Multivector::e(n, n).scale((m - 1) as f64 * x.xn().powi(m - 2))
                }),
            ];
            for (h, mh) in cases {
                let hf = field(n, |x: &Point| Multivector::scalar(n, h(x)));
                let mhf = field(n, mh);
                let got = greens_hyperbolic(&hf, &mhf, &rule, &y, k).unwrap();
                assert!((&got - &hf.eval(&y)).norm() < 1e-9, "n={n}: {got}");
            }
        }
    }

    #[test]
    fn prime_green_reproduces_xn_en() {
        for n in 3..=5 {
            let rule = sphere_rule(&ball(n), 24).unwrap();
            let y = probe(n);
            let k = FormulaId::GreensPrime.reference_constant(n);
            let u = field(n, move |x: &Point| Multivector::e(n, n).scale(x.xn()));
            let mu = field(n, move |_: &Point| Multivector::scalar(n, n as f64 - 3.0));
            let got = greens_prime(&u, &mu, &rule, &y, k).unwrap();
            assert!((&got - &u.eval(&y)).norm() < 1e-9, "n={n}: {got}");
            let real =
                greens_prime_real(&field(n, |x: &Point| Multivector::scalar(n, x.xn())), &mu, &rule, &y, k).unwrap();
            assert!((real - y.xn()).abs() < 1e-9);
        }
    }

    #[test]
    fn prime_green_with_volume_term_reproduces_constant_en() {
        let n = 3;
        let spec = ball(n);
        let y = probe(n);
        let rule = sphere_rule(&spec, 24).unwrap();
        let vol = ball_rule_about(&spec, &y, 24).unwrap();
        let k = FormulaId::GreensPrime.reference_constant(n);
        let u = field(n, move |_: &Point| Multivector::e(n, n));
        // M e_n = (n-2)/x_n, Δ'e_n = (n-2) e_n / x_n^2.
        let mu = field(n, move |x: &Point| Multivector::scalar(n, (n as f64 - 2.0) / x.xn()));
        let lap = field(n, move |x: &Point| {
            Multivector::e(n, n).scale((n as f64 - 2.0) / (x.xn() * x.xn()))
        });
        let got = greens_prime_with_volume(&u, &mu, &lap, &rule, &vol, &y, k).unwrap();
        assert!((&got - &u.eval(&y)).norm() < 1e-8, "{got}");
    }
}
