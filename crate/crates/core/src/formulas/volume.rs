//! Volume potentials built from `G`, `h = D_y G` and `y_n^{n-2} H`.
//!
//! With a compactly supported density `ψ` inside a ball `B` and `y ∈ B`:
//!
//! | potential | identity |
//! |---|---|
//! | `U_G ψ(y) = ∫ G ψ x_n^{2-n}` | `Δ_hyp,y (κ U_G ψ) = ψ`, `κ U_G (Δ_hyp φ) = φ` |
//! | `U_h ψ(y) = ∫ h ψ x_n^{2-n}` | `P(M_y (κ U_h ψ)) = P(ψ)` for real `ψ` |
//! | `U_H ψ(y) = y_n^{n-2} ∫ H ψ` | `Δ'_y (κ U_H ψ) = ψ` |
//!
//! The constants are [`PotentialKind::reference_constant`]. Near the diagonal
//! `G ≈ (2 y_n)^{n-2} / ((n-2) |x - y|^{n-2})`, so `U_G` acts like
//! `-2^{n-2} ω_n Δ^{-1}`; the signs follow from that.

use num_traits::Float;

use super::eval_field;
use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::kernels::{omega, KernelConfig};
use crate::quadrature::{ball_rule, ball_rule_about, integrate_volume, RegionSpec, VolumeRule};

/// Kernel of a volume potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    /// `∫ G(x, y) ψ(x) x_n^{2-n} dx`.
    Green,
    /// `∫ h(x, y) ψ(x) x_n^{2-n} dx`.
    GreenGradient,
    /// `y_n^{n-2} ∫ H(x, y) ψ(x) dx`.
    Prime,
}

impl PotentialKind {
    /// The constant `κ` in the identities of the module table.
    pub fn reference_constant(self, n: usize) -> f64 {
        let p = 2f64.powi(n as i32 - 2);
        let w = omega(n);
        match self {
            PotentialKind::Green => -1.0 / (p * w),
            PotentialKind::GreenGradient => 1.0 / (p * w),
            PotentialKind::Prime => -p / w,
        }
    }

    /// The constant printed alongside the identity (`1/ω_n` in every case).
    pub fn printed_constant(self, n: usize) -> f64 {
        1.0 / omega(n)
    }
}

/// Unnormalized potential at `y` over `rule`.
pub fn volume_potential<F: CliffordField + ?Sized>(
    kind: PotentialKind,
    psi: &F,
    rule: &VolumeRule,
    y: &Point,
) -> Result<Multivector> {
    y.require_upper()?;
    let cfg = KernelConfig::default();
    let m = y.dim() as i32 - 2;
    match kind {
        PotentialKind::Green => integrate_volume(rule, |_, x| {
            Ok(eval_field(psi, x)?.scale(cfg.green_hyperbolic(x, y)? * x.xn().powi(-m)))
        }),
        PotentialKind::GreenGradient => integrate_volume(rule, |_, x| {
            Ok((&cfg.h_kernel(x, y)? * &eval_field(psi, x)?).scale(x.xn().powi(-m)))
        }),
        PotentialKind::Prime => {
            let s = integrate_volume(rule, |_, x| Ok(eval_field(psi, x)?.scale(cfg.green_prime(x, y)?)))?;
            Ok(s.scale(y.xn().powi(m)))
        }
    }
}

/// `y ↦ κ · potential(y)` for a density supported in a ball, as a field.
///
/// Inside the ball every evaluation uses a polar rule centred at the
/// evaluation point, so finite differences of the potential see a smooth
/// quadrature error. Points outside use the plain ball rule.
pub struct PotentialField<F> {
    pub kind: PotentialKind,
    pub density: F,
    pub support: RegionSpec,
    pub order: usize,
    pub kappa: f64,
}

impl<F: CliffordField> PotentialField<F> {
    pub fn new(kind: PotentialKind, density: F, support: RegionSpec, order: usize, kappa: f64) -> Result<Self> {
        if !matches!(support, RegionSpec::Sphere { .. }) {
            return Err(Error::InvalidRegion("potential support must be a ball"));
        }
        support.validate()?;
        Ok(PotentialField {
            kind,
            density,
            support,
            order,
            kappa,
        })
    }

    pub fn try_eval(&self, y: &Point) -> Result<Multivector> {
        let rule = adapted_rule(&self.support, y, self.order)?;
        Ok(volume_potential(self.kind, &self.density, &rule, y)?.scale(self.kappa))
    }
}

/// Ball rule centred at `y` if `y` is inside the ball, plain ball rule otherwise.
pub fn adapted_rule(support: &RegionSpec, y: &Point, order: usize) -> Result<VolumeRule> {
    match support {
        RegionSpec::Sphere { center, radius } if y.distance(center) < *radius => ball_rule_about(support, y, order),
        _ => ball_rule(support, order),
    }
}

impl<F: CliffordField> CliffordField for PotentialField<F> {
    fn dim(&self) -> usize {
        self.density.dim()
    }
    fn eval(&self, y: &Point) -> Multivector {
        self.try_eval(y).unwrap_or_else(|_| nan(self.dim()))
    }
    fn in_domain(&self, y: &Point) -> bool {
        y.xn() > 0.0
    }
}

pub(crate) fn nan(n: usize) -> Multivector {
    Multivector::scalar(n, f64::NAN)
}

/// `∫ G ψ x_n^{2-n} dx`.
pub fn green_volume_potential<F: CliffordField + ?Sized>(psi: &F, rule: &VolumeRule, y: &Point) -> Result<Multivector> {
    volume_potential(PotentialKind::Green, psi, rule, y)
}

/// `∫ h ψ x_n^{2-n} dx`.
pub fn h_volume_potential<F: CliffordField + ?Sized>(psi: &F, rule: &VolumeRule, y: &Point) -> Result<Multivector> {
    volume_potential(PotentialKind::GreenGradient, psi, rule, y)
}

/// `y_n^{n-2} ∫ H ψ dx`.
pub fn prime_volume_potential<F: CliffordField + ?Sized>(psi: &F, rule: &VolumeRule, y: &Point) -> Result<Multivector> {
    volume_potential(PotentialKind::Prime, psi, rule, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{dirac_hodge, field, laplacian_hyperbolic, laplacian_prime, DiffConfig};

    fn support() -> RegionSpec {
        RegionSpec::sphere(Point::from_slice(&[0.0, 0.0, 2.0]), 0.5).unwrap()
    }

    // (1 - |x - c|^2 / R^2)^4 inside the ball, zero outside.
    fn bump(x: &Point) -> f64 {
        let c = Point::from_slice(&[0.0, 0.0, 2.0]);
        let s = 1.0 - x.distance(&c).powi(2) / 0.25;
        if s > 0.0 {
            s.powi(4)
        } else {
            0.0
        }
    }

    fn probe() -> Point {
        Point::from_slice(&[0.1, -0.05, 2.1])
    }

    #[test]
    fn green_potential_inverts_hyperbolic_laplacian() {
        let n = 3;
        let phi = field(n, |x: &Point| Multivector::scalar(3, bump(x)));
        let y = probe();
        let lap = field(n, |x: &Point| {
            if x.distance(&Point::from_slice(&[0.0, 0.0, 2.0])) >= 0.5 {
                return Multivector::zero(3);
            }
            laplacian_hyperbolic(
                &field(3, |z: &Point| Multivector::scalar(3, bump(z))),
                x,
                &DiffConfig::default(),
            )
            .unwrap()
        });
        let rule = ball_rule_about(&support(), &y, 24).unwrap();
        let k = PotentialKind::Green.reference_constant(n);
        let got = green_volume_potential(&lap, &rule, &y).unwrap().scale(k);
        assert!((&got - &phi.eval(&y)).norm() < 1e-4, "{got} vs {}", bump(&y));
    }

    #[test]
    fn laplacian_of_green_potential_returns_density() {
        let n = 3;
        let psi = field(n, |x: &Point| Multivector::scalar(3, bump(x)));
        let k = PotentialKind::Green.reference_constant(n);
        let pot = PotentialField::new(PotentialKind::Green, psi, support(), 20, k).unwrap();
        let y = probe();
        let cfg = DiffConfig::new(2e-2, 2).unwrap();
        let got = laplacian_hyperbolic(&pot, &y, &cfg).unwrap();
        assert!((got.scalar_part() - bump(&y)).abs() < 1e-3, "{got} vs {}", bump(&y));
    }

    #[test]
    fn dirac_hodge_of_gradient_potential_returns_density() {
        let n = 3;
        let psi = field(n, |x: &Point| Multivector::scalar(3, bump(x)));
        let k = PotentialKind::GreenGradient.reference_constant(n);
        let pot = PotentialField::new(PotentialKind::GreenGradient, psi, support(), 20, k).unwrap();
        let y = probe();
        let got = dirac_hodge(&pot, &y, &DiffConfig::new(2e-2, 2).unwrap()).unwrap();
        assert!(
            (got.p_part().scalar_part() - bump(&y)).abs() < 1e-3,
            "{got} vs {}",
            bump(&y)
        );
    }

    #[test]
    fn primed_laplacian_of_prime_potential_returns_density() {
        let n = 3;
        let psi = field(n, |x: &Point| Multivector::scalar(3, bump(x)));
        let k = PotentialKind::Prime.reference_constant(n);
        let pot = PotentialField::new(PotentialKind::Prime, psi, support(), 20, k).unwrap();
        let y = probe();
        let got = laplacian_prime(&pot, &y, &DiffConfig::new(2e-2, 2).unwrap()).unwrap();
        assert!((got.scalar_part() - bump(&y)).abs() < 1e-3, "{got} vs {}", bump(&y));
    }
}
