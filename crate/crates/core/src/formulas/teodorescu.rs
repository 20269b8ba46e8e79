//! Teodorescu transform `I(y) = y_n^{n-2} (∫ E L - ∫ F L̂)`.
//!
//! `I` is hypermonogenic off the support of `L`. Inside,
//! `M I = κ_T L` with `κ_T = -ω_n / 2^{n-2}` ([`teodorescu_constant`]).

use num_traits::Float;

use super::cauchy::ef_volume;
use super::volume::{adapted_rule, nan};
use crate::calculus::{dirac_hodge, CliffordField, DiffConfig};
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::kernels::{omega, KernelConfig};
use crate::quadrature::{RegionSpec, VolumeRule};

/// `M(I) = teodorescu_constant(n) · L` inside the support.
pub fn teodorescu_constant(n: usize) -> f64 {
    -omega(n) / 2f64.powi(n as i32 - 2)
}

/// `I(y)` over a volume rule covering the support of `l`.
pub fn teodorescu<F: CliffordField + ?Sized>(l: &F, rule: &VolumeRule, y: &Point) -> Result<Multivector> {
    y.require_upper()?;
    let s = ef_volume(l, rule, y, &KernelConfig::default())?;
    Ok(s.scale(y.xn().powi(y.dim() as i32 - 2)))
}

/// `y ↦ I(y)` for a density supported in a ball, with a rule centred at each
/// interior evaluation point.
pub struct TeodorescuField<F> {
    pub density: F,
    pub support: RegionSpec,
    pub order: usize,
}

impl<F: CliffordField> TeodorescuField<F> {
    pub fn new(density: F, support: RegionSpec, order: usize) -> Result<Self> {
        if !matches!(support, RegionSpec::Sphere { .. }) {
            return Err(Error::InvalidRegion("Teodorescu support must be a ball"));
        }
        support.validate()?;
        Ok(TeodorescuField {
            density,
            support,
            order,
        })
    }

    pub fn try_eval(&self, y: &Point) -> Result<Multivector> {
        teodorescu(&self.density, &adapted_rule(&self.support, y, self.order)?, y)
    }
}

impl<F: CliffordField> CliffordField for TeodorescuField<F> {
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

/// `M_y I(y)` by finite differences.
pub fn teodorescu_m<F: CliffordField>(field: &TeodorescuField<F>, y: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    let v = dirac_hodge(field, y, cfg)?;
    if !v.is_finite() {
        return Err(Error::Domain("Teodorescu transform failed at a stencil point"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::field;

    fn support() -> RegionSpec {
        RegionSpec::sphere(Point::from_slice(&[0.0, 0.0, 2.0]), 0.5).unwrap()
    }

    fn bump(x: &Point) -> Multivector {
        let s = 1.0 - x.distance(&Point::from_slice(&[0.0, 0.0, 2.0])).powi(2) / 0.25;
        let w = if s > 0.0 { s.powi(4) } else { 0.0 };
        (Multivector::e(3, 1) + Multivector::e(3, 3).scale(0.5) + Multivector::scalar(3, 0.25)).scale(w)
    }

    #[test]
    fn hypermonogenic_outside_support() {
        let f = TeodorescuField::new(field(3, bump), support(), 16).unwrap();
        for y in [[0.9, 0.0, 2.0], [0.0, 0.3, 1.2], [0.4, -0.4, 2.8]] {
            let y = Point::from_slice(&y);
            let m = teodorescu_m(&f, &y, &DiffConfig::default()).unwrap();
            let scale = f.eval(&y).norm();
            assert!(m.norm() < 1e-5 * scale.max(1.0), "{y:?}: {m}");
        }
    }

    #[test]
    fn inverts_dirac_hodge_inside_support() {
        let f = TeodorescuField::new(field(3, bump), support(), 20).unwrap();
        let y = Point::from_slice(&[0.1, -0.05, 2.1]);
        let m = teodorescu_m(&f, &y, &DiffConfig::new(1e-2, 2).unwrap()).unwrap();
        let got = m.scale(1.0 / teodorescu_constant(3));
        assert!((&got - &bump(&y)).norm() < 1e-3, "{got} vs {}", bump(&y));
    }

    #[test]
    fn zero_density_gives_zero() {
        let f = TeodorescuField::new(field(3, |_: &Point| Multivector::zero(3)), support(), 8).unwrap();
        assert!(f.eval(&Point::from_slice(&[0.0, 0.0, 2.1])).is_zero());
    }
}
