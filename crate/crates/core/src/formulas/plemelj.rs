//! Boundary behaviour of the Cauchy layer on a sphere: Plemelj limits,
//! Hardy projections and the Kerzman-Stein operator.
//!
//! The layer is `C φ(z) = κ z_n^{n-2} ∮ (E(x, z) n φ - F(x, z) n̂ φ̂) dσ` with
//! `κ = 2^{n-2} / ω_n`, and `T φ(y)` is its principal value on the sphere.
//! Densities are fields evaluated on the sphere, so the cap-excised rules can
//! place nodes wherever they need them.
//!
//! Extrapolation: PV values use cap radii `ε ∈ {4, 2, 1} · ε_0` and
//! one-sided limits use normal offsets `δ ∈ {4, 2, 1} · δ_0`; both are
//! combined by [`richardson_quadratic`].

use alloc::vec::Vec;

use num_traits::Float;

use super::cauchy::ef_surface;
use super::volume::nan;
use super::{eval_field, richardson_linear, richardson_quadratic, FormulaId};
use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::kernels::KernelConfig;
use crate::quadrature::{graded_sphere_rule, integrate_surface, pv_sphere_rule, RegionSpec, SurfaceRule};

/// Settings for the boundary machinery.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlemeljConfig {
    /// Gauss points per polar panel and half the azimuthal count.
    pub order: usize,
    /// Smallest cap radius as a fraction of the sphere radius.
    pub cap: f64,
    /// Smallest normal offset as a fraction of the sphere radius.
    pub offset: f64,
}

impl Default for PlemeljConfig {
    fn default() -> Self {
        PlemeljConfig {
            order: 16,
            cap: 0.025,
            offset: 0.025,
        }
    }
}

impl PlemeljConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || !(self.cap > 0.0 && self.cap < 0.125) || !(self.offset > 0.0 && self.offset < 0.125) {
            return Err(Error::Domain(
                "Plemelj config needs order > 0 and cap, offset in (0, 1/8)",
            ));
        }
        Ok(())
    }
}

/// A sphere carrying densities.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        RegionSpec::sphere(center.clone(), radius)?;
        Ok(Sphere { center, radius })
    }

    pub fn spec(&self) -> RegionSpec {
        RegionSpec::Sphere {
            center: self.center.clone(),
            radius: self.radius,
        }
    }

    /// Outward unit normal at the radial projection of `y`.
    pub fn normal(&self, y: &Point) -> Result<Point> {
        let d = y - &self.center;
        let r = d.norm();
        if !(r > 0.0) {
            return Err(Error::Domain("the centre has no normal"));
        }
        Ok(d.scale(1.0 / r))
    }

    /// Radial projection onto the sphere.
    pub fn project(&self, y: &Point) -> Result<Point> {
        Ok(self.center.offset(&self.normal(y)?, self.radius))
    }

    fn check_upper(&self) -> Result<()> {
        if self.center.xn() - self.radius <= 0.0 {
            return Err(Error::NotInUpperHalfSpace {
                xn: self.center.xn() - self.radius,
            });
        }
        Ok(())
    }
}

fn layer_constant(n: usize) -> f64 {
    FormulaId::CauchyFull.reference_constant(n)
}

/// `C φ(z)` for `z` off the sphere, with a rule graded towards the nearest point.
pub fn cauchy_layer<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    z: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    sphere.check_upper()?;
    z.require_upper()?;
    let gap = (z.distance(&sphere.center) - sphere.radius).abs();
    if !(gap > 0.0) {
        return Err(Error::Domain("layer evaluated on the sphere itself"));
    }
    let pole = sphere.normal(z)?;
    let rule = graded_sphere_rule(&sphere.spec(), cfg.order, &pole, gap)?;
    let s = ef_surface(phi, &rule, z, &KernelConfig::default())?;
    Ok(s.scale(layer_constant(z.dim()) * z.xn().powi(z.dim() as i32 - 2)))
}

fn cap_rules(sphere: &Sphere, y: &Point, cfg: &PlemeljConfig) -> Result<[SurfaceRule; 3]> {
    let spec = sphere.spec();
    let e = cfg.cap * sphere.radius;
    Ok([
        pv_sphere_rule(&spec, cfg.order, y, 4.0 * e)?,
        pv_sphere_rule(&spec, cfg.order, y, 2.0 * e)?,
        pv_sphere_rule(&spec, cfg.order, y, e)?,
    ])
}

fn on_sphere(sphere: &Sphere, y: &Point) -> Result<Point> {
    sphere.check_upper()?;
    let p = sphere.project(y)?;
    if p.distance(y) > 1e-9 * sphere.radius {
        return Err(Error::Domain("point is not on the sphere"));
    }
    Ok(p)
}

/// Extrapolated value plus the gap between quadratic and linear extrapolation.
fn extrapolate(v: &[Multivector; 3]) -> (Multivector, f64) {
    let q = richardson_quadratic(&v[0], &v[1], &v[2]);
    let l = richardson_linear(&v[1], &v[2]);
    let gap = (&q - &l).norm();
    (q, gap)
}

/// `T φ(y) = κ PV ∮ y_n^{n-2} (E n φ - F n̂ φ̂) dσ` at a point `y` of the sphere.
pub fn pv_value<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    Ok(pv_value_with_gap(phi, sphere, y, cfg)?.0)
}

fn pv_value_with_gap<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<(Multivector, f64)> {
    cfg.validate()?;
    let y = on_sphere(sphere, y)?;
    let k = layer_constant(y.dim()) * y.xn().powi(y.dim() as i32 - 2);
    let kc = KernelConfig::default();
    let rules = cap_rules(sphere, &y, cfg)?;
    let mut vals = [
        Multivector::zero(y.dim()),
        Multivector::zero(y.dim()),
        Multivector::zero(y.dim()),
    ];
    for (v, r) in vals.iter_mut().zip(rules.iter()) {
        *v = ef_surface(phi, r, &y, &kc)?.scale(k);
    }
    Ok(extrapolate(&vals))
}

/// Interior limit, exterior limit and principal value at `y` on the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct PlemeljResult {
    pub interior: Multivector,
    pub exterior: Multivector,
    pub pv: Multivector,
    /// Largest gap between quadratic and linear extrapolation among the three.
    pub extrapolation_gap: f64,
}

impl PlemeljResult {
    /// `interior - exterior - φ(y)`.
    pub fn jump_residual(&self, phi_y: &Multivector) -> f64 {
        (&(&self.interior - &self.exterior) - phi_y).norm()
    }

    /// `interior - pv - φ(y)/2`.
    pub fn half_residual(&self, phi_y: &Multivector) -> f64 {
        (&(&self.interior - &self.pv) - &phi_y.scale(0.5)).norm()
    }
}

/// Boundary values of the Cauchy layer at `y` on the sphere.
pub fn plemelj_boundary<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<PlemeljResult> {
    cfg.validate()?;
    let y = on_sphere(sphere, y)?;
    let nu = sphere.normal(&y)?;
    let d = cfg.offset * sphere.radius;
    let side = |sign: f64| -> Result<(Multivector, f64)> {
        let mut v = [
            Multivector::zero(y.dim()),
            Multivector::zero(y.dim()),
            Multivector::zero(y.dim()),
        ];
        for (slot, f) in v.iter_mut().zip([4.0, 2.0, 1.0]) {
            *slot = cauchy_layer(phi, sphere, &y.offset(&nu, sign * f * d), cfg)?;
        }
        Ok(extrapolate(&v))
    };
    let (interior, g1) = side(-1.0)?;
    let (exterior, g2) = side(1.0)?;
    let (pv, g3) = pv_value_with_gap(phi, sphere, &y, cfg)?;
    Ok(PlemeljResult {
        interior,
        exterior,
        pv,
        extrapolation_gap: g1.max(g2).max(g3),
    })
}

/// `(½ I ± T) φ` at each of `nodes` (points of the sphere).
pub fn hardy_project<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    sign: f64,
    nodes: &[Point],
    cfg: &PlemeljConfig,
) -> Result<Vec<Multivector>> {
    nodes.iter().map(|y| hardy_at(phi, sphere, sign, y, cfg)).collect()
}

fn hardy_at<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    sign: f64,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    let y = on_sphere(sphere, y)?;
    let t = pv_value(phi, sphere, &y, cfg)?;
    Ok(eval_field(phi, &y)?.scale(0.5) + t.scale(sign.signum()))
}

/// `(½ I ± T) φ` as a density on the sphere, evaluated lazily, so projections
/// can be composed.
pub struct HardyField<F> {
    pub inner: F,
    pub sphere: Sphere,
    pub sign: f64,
    pub cfg: PlemeljConfig,
}

impl<F: CliffordField> CliffordField for HardyField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, y: &Point) -> Multivector {
        self.sphere
            .project(y)
            .and_then(|p| hardy_at(&self.inner, &self.sphere, self.sign, &p, &self.cfg))
            .unwrap_or_else(|_| nan(self.dim()))
    }
}

/// `K_E(x, y) = κ y_n^{n-2} E(x, y) n(x)` and `K_F(x, y) = κ y_n^{n-2} F(x, y) n̂(x)`.
fn layer_kernels(x: &Point, nx: &Point, y: &Point, kc: &KernelConfig) -> Result<(Multivector, Multivector)> {
    let k = layer_constant(y.dim()) * y.xn().powi(y.dim() as i32 - 2);
    let (e, f) = kc.e_f_kernels(x, y)?;
    let nm = nx.to_multivector();
    Ok(((&e * &nm).scale(k), (&f * &nm.hat()).scale(k)))
}

/// Integrand of `T* φ(y)` at `x`: `conj(K_E(y, x)) φ(x) - hat(conj(K_F(y, x)) φ(x))`,
/// the adjoint under `<f, g> = ∮ Sc(conj(f) g) dσ`.
fn adjoint_term(x: &Point, y: &Point, ny: &Point, phi_x: &Multivector, kc: &KernelConfig) -> Result<Multivector> {
    let (ke, kf) = layer_kernels(y, ny, x, kc)?;
    Ok(&ke.conjugate() * phi_x - (&kf.conjugate() * phi_x).hat())
}

fn forward_term(x: &Point, nx: &Point, y: &Point, phi_x: &Multivector, kc: &KernelConfig) -> Result<Multivector> {
    let (ke, kf) = layer_kernels(x, nx, y, kc)?;
    Ok(&ke * phi_x - &kf * &phi_x.hat())
}

/// `T* φ(y)` by cap excision and extrapolation.
pub fn pv_adjoint<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    cfg.validate()?;
    let y = on_sphere(sphere, y)?;
    let ny = sphere.normal(&y)?;
    let kc = KernelConfig::default();
    let rules = cap_rules(sphere, &y, cfg)?;
    let mut vals = [
        Multivector::zero(y.dim()),
        Multivector::zero(y.dim()),
        Multivector::zero(y.dim()),
    ];
    for (v, r) in vals.iter_mut().zip(rules.iter()) {
        *v = integrate_surface(r, |_, x, _| adjoint_term(x, &y, &ny, &eval_field(phi, x)?, &kc))?;
    }
    Ok(extrapolate(&vals).0)
}

/// `A φ(y) = (T - T*) φ(y)` from its weakly singular kernel, on a rule graded
/// towards `y` (no excision needed).
pub fn kerzman_stein<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    cfg.validate()?;
    let y = on_sphere(sphere, y)?;
    let ny = sphere.normal(&y)?;
    let kc = KernelConfig::default();
    let rule = graded_sphere_rule(&sphere.spec(), cfg.order, &ny, cfg.cap * sphere.radius)?;
    integrate_surface(&rule, |_, x, nx| {
        let px = eval_field(phi, x)?;
        Ok(forward_term(x, nx, &y, &px, &kc)? - adjoint_term(x, &y, &ny, &px, &kc)?)
    })
}

/// Oracle for [`kerzman_stein`]: `T φ(y) - T* φ(y)` with both principal values
/// taken separately.
pub fn kerzman_stein_pv<F: CliffordField + ?Sized>(
    phi: &F,
    sphere: &Sphere,
    y: &Point,
    cfg: &PlemeljConfig,
) -> Result<Multivector> {
    Ok(pv_value(phi, sphere, y, cfg)? - pv_adjoint(phi, sphere, y, cfg)?)
}

/// Nyström form of `A` on a fixed rule (diagonal omitted). The discrete
/// operator is exactly skew under the weighted pairing `Σ w Sc(conj(f) g)`.
pub fn kerzman_stein_nystrom(values: &[Multivector], rule: &SurfaceRule) -> Result<Vec<Multivector>> {
    if values.len() != rule.len() {
        return Err(Error::DimensionMismatch {
            expected: rule.len(),
            found: values.len(),
        });
    }
    let kc = KernelConfig::default();
    let nodes = rule.nodes();
    let normals = rule.normals();
    let w = rule.weights();
    (0..rule.len())
        .map(|i| {
            let mut acc = Multivector::zero(rule.dim());
            for j in 0..rule.len() {
                if j == i {
                    continue;
                }
                let f = forward_term(&nodes[j], &normals[j], &nodes[i], &values[j], &kc)?;
                let a = adjoint_term(&nodes[j], &nodes[i], &normals[i], &values[j], &kc)?;
                acc += &(f - a).scale(w[j]);
            }
            Ok(acc)
        })
        .collect()
}

/// `Σ w Sc(conj(f) g)`.
pub fn discrete_pairing(f: &[Multivector], g: &[Multivector], rule: &SurfaceRule) -> f64 {
    f.iter()
        .zip(g)
        .zip(rule.weights())
        .map(|((a, b), w)| w * (&a.conjugate() * b).scalar_part())
        .sum()
}
