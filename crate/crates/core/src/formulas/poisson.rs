//! Poisson extension of boundary data on `R^{n-1}` into upper half space.

use num_traits::Float;

use super::eval_field;
use super::volume::nan;
use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::KernelConfig;
use crate::quadrature::{integrate_volume, pairwise_sum_scalar, plane_rule, VolumeRule};

/// Whole-plane rule adapted to `y`: centred at the foot of `y`, scale `y_n`.
pub fn poisson_rule(y: &Point, order: usize, panels: usize) -> Result<VolumeRule> {
    y.require_upper()?;
    let n = y.dim();
    let foot = Point::new(y.coords()[..n - 1].iter().copied());
    plane_rule(&foot, y.xn(), order, panels)
}

/// `κ ∫ K(x, y) φ(x) dx` over a rule on `{x_n = 0}` (nodes carry `x_n = 0`).
pub fn poisson_extend<F: CliffordField + ?Sized>(
    phi: &F,
    rule: &VolumeRule,
    y: &Point,
    kappa: f64,
) -> Result<Multivector> {
    let cfg = KernelConfig::default();
    let s = integrate_volume(rule, |_, x| Ok(eval_field(phi, x)?.scale(cfg.poisson_density(x, y)?)))?;
    Ok(s.scale(kappa))
}

/// `κ ∫ K(x, y) dx` over the rule.
pub fn poisson_mass(rule: &VolumeRule, y: &Point, kappa: f64) -> Result<f64> {
    let cfg = KernelConfig::default();
    let s = pairwise_sum_scalar(rule.len(), |i| {
        Ok(cfg.poisson_density(&rule.nodes()[i], y)? * rule.weights()[i])
    })?;
    Ok(kappa * s)
}

/// Fraction of the kernel mass outside a disc of radius `radius` about the
/// foot of `y`, bounded through the `|x - y|^{2-2n}` decay.
pub fn poisson_tail_bound(y: &Point, radius: f64) -> f64 {
    let n = y.dim() as i32;
    let t = y.xn();
    if radius <= 0.0 {
        return 1.0;
    }
    // ∫_{|x'| > ρ} 2^{n-1} t^{n-1} |x'|^{2-2n} dx' / (ω_n / 2^{n-2}) ≤ c (t/ρ)^{n-1}.
    let c =
        2f64.powi(n - 2) * crate::kernels::omega(y.dim() - 1) / crate::kernels::omega(y.dim()) * 2.0 / (n - 1) as f64;
    (c * (t / radius).powi(n - 1)).min(1.0)
}

/// Boundary value at `foot` (a point with `x_n = 0`) from extensions at three heights.
///
/// The extension behaves like `φ + a t² + b t^{n-1}` as `t → 0`, with
/// `t^{n-1} ln t` in place of `t^{n-1}` for odd `n` (for `n = 3` the two
/// second-order terms become `t² ln t` and `t²`). The three samples are fitted
/// with exactly those terms.
pub fn poisson_boundary_limit<F: CliffordField + ?Sized>(
    phi: &F,
    foot: &Point,
    heights: [f64; 3],
    order: usize,
    panels: usize,
    kappa: f64,
) -> Result<Multivector> {
    let n = foot.dim();
    if heights.iter().any(|t| !(*t > 0.0))
        || heights[0] == heights[1]
        || heights[1] == heights[2]
        || heights[0] == heights[2]
    {
        return Err(Error::Domain("boundary limit needs three distinct positive heights"));
    }
    let basis = |t: f64| -> [f64; 3] {
        let odd_log = if n % 2 == 1 { t.ln() } else { 1.0 };
        if n == 3 {
            [1.0, t * t * t.ln(), t * t]
        } else {
            [1.0, t * t, t.powi(n as i32 - 1) * odd_log]
        }
    };
    let mut rows = [[0.0; 3]; 3];
    let mut vals = Vec::with_capacity(3);
    for (row, t) in rows.iter_mut().zip(heights) {
        *row = basis(t);
        let mut y = foot.clone();
        y.coords_mut()[n - 1] = t;
        vals.push(poisson_extend(phi, &poisson_rule(&y, order, panels)?, &y, kappa)?);
    }
    // First row of the inverse of the 3x3 system gives the weights of φ.
    let m = rows;
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if !(det.abs() > 0.0) {
        return Err(Error::Domain("singular boundary-limit fit"));
    }
    let w = [
        (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det,
        (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det,
        (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det,
    ];
    Ok(vals[0].scale(w[0]) + vals[1].scale(w[1]) + vals[2].scale(w[2]))
}

/// `y ↦ κ ∫ K(x, y) φ(x) dx` over one fixed rule (valid for `y` near the
/// point the rule was built for).
pub struct PoissonExtension<'a, F> {
    pub phi: F,
    pub rule: &'a VolumeRule,
    pub kappa: f64,
}

impl<F: CliffordField> CliffordField for PoissonExtension<'_, F> {
    fn dim(&self) -> usize {
        self.phi.dim()
    }
    fn eval(&self, y: &Point) -> Multivector {
        poisson_extend(&self.phi, self.rule, y, self.kappa).unwrap_or_else(|_| nan(self.dim()))
    }
    fn in_domain(&self, y: &Point) -> bool {
        y.xn() > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{field, laplacian_hyperbolic, DiffConfig};
    use crate::formulas::{richardson_quadratic, FormulaId};

    fn gaussian(x: &Point) -> Multivector {
        let r2: f64 = x.coords()[..x.dim() - 1].iter().map(|c| c * c).sum();
        Multivector::scalar(x.dim(), (-r2).exp())
    }

    #[test]
    fn kernel_mass_is_one() {
        for n in 3..=5 {
            let y = Point::new((0..n).map(|k| if k == n - 1 { 0.7 } else { 0.3 }));
            let rule = poisson_rule(&y, 24, 4).unwrap();
            let m = poisson_mass(&rule, &y, FormulaId::Poisson.reference_constant(n)).unwrap();
            assert!((m - 1.0).abs() < 1e-10, "n={n}: {m}");
        }
    }

    #[test]
    fn gaussian_extension_is_hyperbolic_harmonic() {
        let n = 3;
        let y = Point::from_slice(&[0.2, -0.1, 0.6]);
        let rule = poisson_rule(&y, 48, 8).unwrap();
        let ext = PoissonExtension {
            phi: field(n, gaussian),
            rule: &rule,
            kappa: FormulaId::Poisson.reference_constant(n),
        };
        let r = laplacian_hyperbolic(&ext, &y, &DiffConfig::new(1e-2, 3).unwrap()).unwrap();
        assert!(r.norm() < 1e-4, "{r}");
    }

    #[test]
    fn boundary_limit_recovers_data() {
        let n = 3;
        let k = FormulaId::Poisson.reference_constant(n);
        let phi = field(n, gaussian);
        let foot = Point::from_slice(&[0.3, 0.2, 0.0]);
        let lim = poisson_boundary_limit(&phi, &foot, [0.1, 0.05, 0.025], 48, 8, k).unwrap();
        let want = gaussian(&foot);
        assert!((&lim - &want).norm() < 1e-4, "{lim} vs {want}");
        // Plain quadratic extrapolation in t misses the t² ln t term.
        let vals: alloc::vec::Vec<Multivector> = [0.1, 0.05, 0.025]
            .iter()
            .map(|t| {
                let y = Point::from_slice(&[0.3, 0.2, *t]);
                poisson_extend(&phi, &poisson_rule(&y, 48, 8).unwrap(), &y, k).unwrap()
            })
            .collect();
        let naive = richardson_quadratic(&vals[0], &vals[1], &vals[2]);
        assert!((&naive - &want).norm() > 1e-3);
    }

    #[test]
    fn tail_bound_decays() {
        let y = Point::from_slice(&[0.0, 0.0, 1.0]);
        assert!(poisson_tail_bound(&y, 20.0) < 1e-2);
        assert!(poisson_tail_bound(&y, 40.0) < poisson_tail_bound(&y, 20.0));
    }
}
