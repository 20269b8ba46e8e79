//! Closed-form kernels on upper half space.
//!
//! Notation: `d1 = |x - y|`, `d2 = |x - ŷ| = |x̂ - y|`, `m = n - 2`.
//!
//! | kernel | value |
//! |---|---|
//! | `G`  | `g(d1 / d2)` with `g(r) = ∫_r^1 (1 - t²)^m / t^{n-1} dt` |
//! | `H`  | `1 / (m d1^m d2^m)` |
//! | `E`  | `(x - y)^{-1} / (d1^m d2^m)` |
//! | `F`  | `(x̂ - y)^{-1} / (d1^m d2^m)` |
//! | `p = D_x G` | `(4 x_n y_n)^m ((x - y)^{-1} - (x - ŷ)^{-1}) / (d1^m d2^m)` |
//! | `h = D_y G` | `(4 x_n y_n)^m ((y - x)^{-1} - (y - x̂)^{-1}) / (d1^m d2^m)` |
//! | `q = D_x H` | `((x - y)^{-1} + (x - ŷ)^{-1}) / (d1^m d2^m)` |
//!
//! The closed forms for `p`, `h` and `q` are derived by the chain rule and
//! cross-checked against finite differences of `G` and `H` in the tests.

use num_traits::Float;

use crate::calculus::{
    dirac_hodge, dirac_left, field, laplacian_hyperbolic, laplacian_prime, CliffordField, DiffConfig,
};
use crate::clifford::{check_dim, Multivector, Point};
use crate::error::{Error, Result};

/// Default separation below which a pair is rejected as singular.
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-8;

/// Surface area of the unit sphere in `R^n`.
pub fn omega(n: usize) -> f64 {
    use core::f64::consts::PI;
    // ω_1 = 2, ω_2 = 2π, ω_{k+2} = 2π ω_k / k
    let (mut w, mut k) = if n % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while k < n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}

fn binomial(m: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    c
}

/// `g(r) = ∫_r^1 (1 - t²)^{n-2} / t^{n-1} dt` by exact term-wise antiderivatives.
pub fn g_profile(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain("g_profile needs 0 < r <= 1"));
    }
    let m = n - 2;
    let mut sum = 0.0;
    for k in 0..=m {
        // (-1)^k C(m,k) t^{2k - n + 1}
        let coef = if k % 2 == 0 { 1.0 } else { -1.0 } * binomial(m, k);
        let p = 2 * k as i64 - n as i64 + 2;
        let term = if p == 0 {
            -r.ln()
        } else {
            (1.0 - r.powi(p as i32)) / p as f64
        };
        sum += coef * term;
    }
    Ok(sum)
}

/// `g'(r) = -(1 - r²)^{n-2} / r^{n-1}`.
pub fn g_profile_derivative(r: f64, n: usize) -> f64 {
    -(1.0 - r * r).powi(n as i32 - 2) / r.powi(n as i32 - 1)
}

/// Kernel evaluation settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelConfig {
    pub min_separation: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            min_separation: DEFAULT_MIN_SEPARATION,
        }
    }
}

/// Distances shared by all kernels of a pair.
#[derive(Clone, Copy, Debug)]
struct Pair {
    n: usize,
    d1: f64,
    d2: f64,
    /// `d1^{n-2} d2^{n-2}`
    dm: f64,
}

fn sub(a: &Point, b: &Point) -> Point {
    a - b
}

/// `v^{-1} s` as a multivector, for a nonzero vector `v`.
fn inv_scaled(v: &Point, s: f64) -> Multivector {
    v.scale(-s / v.norm_squared()).to_multivector()
}

impl KernelConfig {
    fn pair(&self, x: &Point, y: &Point) -> Result<Pair> {
        let n = x.dim();
        check_dim(n)?;
        if y.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: y.dim(),
            });
        }
        let d1 = x.distance(y);
        let d2 = x.distance(&y.hat());
        if !(d1 >= self.min_separation) {
            return Err(Error::Singular { separation: d1 });
        }
        if !(d2 >= self.min_separation) {
            return Err(Error::Singular { separation: d2 });
        }
        let m = n as i32 - 2;
        Ok(Pair {
            n,
            d1,
            d2,
            dm: (d1 * d2).powi(m),
        })
    }

    fn upper_pair(&self, x: &Point, y: &Point) -> Result<Pair> {
        x.require_upper()?;
        y.require_upper()?;
        self.pair(x, y)
    }

    /// `G(x, y) = g(|x - y| / |x - ŷ|)`.
    pub fn green_hyperbolic(&self, x: &Point, y: &Point) -> Result<f64> {
        let p = self.upper_pair(x, y)?;
        g_profile((p.d1 / p.d2).min(1.0), p.n)
    }

    /// `H(x, y) = 1 / ((n-2) |x - y|^{n-2} |x - ŷ|^{n-2})`.
    pub fn green_prime(&self, x: &Point, y: &Point) -> Result<f64> {
        let p = self.pair(x, y)?;
        Ok(1.0 / ((p.n as f64 - 2.0) * p.dm))
    }

    /// `E(x, y) = (x - y)^{-1} / (|x - y|^{n-2} |x - ŷ|^{n-2})`.
    pub fn e_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.pair(x, y)?;
        Ok(inv_scaled(&sub(x, y), 1.0 / p.dm))
    }

    /// `F(x, y) = (x̂ - y)^{-1} / (|x - y|^{n-2} |x̂ - y|^{n-2})`.
    pub fn f_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.pair(x, y)?;
        Ok(inv_scaled(&sub(&x.hat(), y), 1.0 / p.dm))
    }

    /// Both `E(x, y)` and `F(x, y)` from one distance computation.
    pub fn e_f_kernels(&self, x: &Point, y: &Point) -> Result<(Multivector, Multivector)> {
        let p = self.pair(x, y)?;
        let s = 1.0 / p.dm;
        Ok((inv_scaled(&sub(x, y), s), inv_scaled(&sub(&x.hat(), y), s)))
    }

    /// `p(x, y) = D_x G(x, y)`.
    pub fn p_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.upper_pair(x, y)?;
        let s = (4.0 * x.xn() * y.xn()).powi(p.n as i32 - 2) / p.dm;
        Ok(inv_scaled(&sub(x, y), s) - inv_scaled(&sub(x, &y.hat()), s))
    }

    /// `h(x, y) = D_y G(x, y)`.
    pub fn h_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.upper_pair(x, y)?;
        let s = (4.0 * x.xn() * y.xn()).powi(p.n as i32 - 2) / p.dm;
        Ok(inv_scaled(&sub(y, x), s) - inv_scaled(&sub(y, &x.hat()), s))
    }

    /// `q(x, y) = D_x H(x, y)`.
    pub fn q_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.pair(x, y)?;
        let s = 1.0 / p.dm;
        Ok(inv_scaled(&sub(x, y), s) + inv_scaled(&sub(x, &y.hat()), s))
    }

    /// `r(x, y) = y_n^{2-n} p(x, y)`.
    pub fn r_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.p_kernel(x, y)?;
        Ok(p.scale(y.xn().powi(2 - x.dim() as i32)))
    }

    /// `D_y E(x, y) = (n-2)(x̂ - y)(x̄ - ȳ) / (|x̂ - y|^n |x - y|^n)`.
    pub fn dy_e_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.pair(x, y)?;
        let n = p.n as i32;
        let s = (p.n as f64 - 2.0) / (p.d1 * p.d2).powi(n);
        let lhs = sub(&x.hat(), y).to_multivector();
        let rhs = sub(x, y).to_multivector().conjugate();
        Ok((&lhs * &rhs).scale(s))
    }

    /// `D_y F(x, y) = (n-2)(x - y)(conj(x̂) - ȳ) / (|x̂ - y|^n |x - y|^n)`.
    pub fn dy_f_kernel(&self, x: &Point, y: &Point) -> Result<Multivector> {
        let p = self.pair(x, y)?;
        let n = p.n as i32;
        let s = (p.n as f64 - 2.0) / (p.d1 * p.d2).powi(n);
        let lhs = sub(x, y).to_multivector();
        let rhs = sub(&x.hat(), y).to_multivector().conjugate();
        Ok((&lhs * &rhs).scale(s))
    }

    /// Unnormalized Poisson density `y_n^{n-1} (1/(d1^n d2^{n-2}) + 1/(d1^{n-2} d2^n))`
    /// for a boundary point `x` (`x_n = 0`).
    pub fn poisson_density(&self, x: &Point, y: &Point) -> Result<f64> {
        if x.xn() != 0.0 {
            return Err(Error::Domain("Poisson kernel needs a boundary point with x_n = 0"));
        }
        y.require_upper()?;
        let p = self.pair(x, y)?;
        let n = p.n as i32;
        let a = 1.0 / (p.d1.powi(n) * p.d2.powi(n - 2));
        let b = 1.0 / (p.d1.powi(n - 2) * p.d2.powi(n));
        Ok(y.xn().powi(n - 1) * (a + b))
    }

    /// Poisson kernel with prefactor `2^{n-2} / ω_n`; integrates to one over `R^{n-1}`.
    pub fn poisson_kernel(&self, x: &Point, y: &Point) -> Result<f64> {
        let n = x.dim();
        Ok(poisson_prefactor(n) * self.poisson_density(x, y)?)
    }
}

/// `2^{n-2} / ω_n`.
pub fn poisson_prefactor(n: usize) -> f64 {
    2f64.powi(n as i32 - 2) / omega(n)
}

macro_rules! default_kernel {
    ($($(#[$doc:meta])* $name:ident -> $ty:ty;)*) => {$(
        $(#[$doc])*
        pub fn $name(x: &Point, y: &Point) -> Result<$ty> {
            KernelConfig::default().$name(x, y)
        }
    )*};
}

default_kernel! {
    /// [`KernelConfig::green_hyperbolic`] with default separation.
    green_hyperbolic -> f64;
    /// [`KernelConfig::green_prime`] with default separation.
    green_prime -> f64;
    /// [`KernelConfig::e_kernel`] with default separation.
    e_kernel -> Multivector;
    /// [`KernelConfig::f_kernel`] with default separation.
    f_kernel -> Multivector;
    /// [`KernelConfig::e_f_kernels`] with default separation.
    e_f_kernels -> (Multivector, Multivector);
    /// [`KernelConfig::p_kernel`] with default separation.
    p_kernel -> Multivector;
    /// [`KernelConfig::h_kernel`] with default separation.
    h_kernel -> Multivector;
    /// [`KernelConfig::q_kernel`] with default separation.
    q_kernel -> Multivector;
    /// [`KernelConfig::r_kernel`] with default separation.
    r_kernel -> Multivector;
    /// [`KernelConfig::dy_e_kernel`] with default separation.
    dy_e_kernel -> Multivector;
    /// [`KernelConfig::dy_f_kernel`] with default separation.
    dy_f_kernel -> Multivector;
    /// [`KernelConfig::poisson_density`] with default separation.
    poisson_density -> f64;
    /// [`KernelConfig::poisson_kernel`] with default separation.
    poisson_kernel -> f64;
}

/// An algebraic identity evaluated in floating point.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    /// Value of the expression that vanishes identically.
    pub residual: Multivector,
    /// Sum of the norms of its terms, for relative error.
    pub scale: f64,
}

impl IdentityCheck {
    pub fn relative_error(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / self.scale
        }
    }
}

/// `e_n(x̄ - ȳ)|x̂ - y|² + 2y_n(x̂ - y)(x̄ - ȳ) - e_n(x̄ - conj(ŷ))|x - y|²`,
/// which vanishes for all `x, y`. It is the vector part of `M_y` applied to
/// the `E` term of the point-source Teodorescu potential.
pub fn teodorescu_identity_e(x: &Point, y: &Point) -> IdentityCheck {
    let n = x.dim();
    let en = Multivector::e(n, n);
    let v = |p: &Point| p.to_multivector();
    let xbar_ybar = v(&sub(x, y)).conjugate();
    let xbar_yhatbar = v(&sub(x, &y.hat())).conjugate();
    let t1 = (&en * &xbar_ybar).scale(sub(&x.hat(), y).norm_squared());
    let t2 = (&v(&sub(&x.hat(), y)) * &xbar_ybar).scale(2.0 * y.xn());
    let t3 = (&en * &xbar_yhatbar).scale(sub(x, y).norm_squared());
    let scale = t1.norm() + t2.norm() + t3.norm();
    IdentityCheck {
        residual: t1 + t2 - t3,
        scale,
    }
}

/// `-(x - y)(x̄ - ȳ)e_n(conj(x̂) - ȳ) - 2y_n(x - y)(conj(x̂) - ȳ) + (x - y)e_n|x̂ - y|²`,
/// the companion identity for the `F` term.
pub fn teodorescu_identity_f(x: &Point, y: &Point) -> IdentityCheck {
    let n = x.dim();
    let en = Multivector::e(n, n);
    let v = |p: &Point| p.to_multivector();
    let xy = v(&sub(x, y));
    let xbar_ybar = xy.conjugate();
    let xhatbar_ybar = v(&sub(&x.hat(), y)).conjugate();
    let t1 = &(&(&xy * &xbar_ybar) * &en) * &xhatbar_ybar;
    let t2 = (&xy * &xhatbar_ybar).scale(2.0 * y.xn());
    let t3 = (&xy * &en).scale(sub(&x.hat(), y).norm_squared());
    let scale = t1.norm() + t2.norm() + t3.norm();
    IdentityCheck {
        residual: t3 - t1 - t2,
        scale,
    }
}

/// Deviation of each closed-form derivative kernel from finite differences of
/// its potential at one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivativeDeviations {
    /// `|p - D_x G|`.
    pub p: f64,
    /// `|h - D_y G|`.
    pub h: f64,
    /// `|q - D_x H|`.
    pub q: f64,
    /// `|D_y E - FD|`.
    pub dy_e: f64,
    /// `|D_y F - FD|`.
    pub dy_f: f64,
}

impl DerivativeDeviations {
    pub fn max(&self) -> f64 {
        self.p.max(self.h).max(self.q).max(self.dy_e).max(self.dy_f)
    }
}

fn scalar_field(n: usize, f: impl Fn(&Point) -> Result<f64>) -> impl CliffordField {
    field(n, move |z: &Point| Multivector::scalar(n, f(z).unwrap_or(f64::NAN)))
}

fn multivector_field(n: usize, f: impl Fn(&Point) -> Result<Multivector>) -> impl CliffordField {
    field(n, move |z: &Point| {
        f(z).unwrap_or_else(|_| Multivector::scalar(n, f64::NAN))
    })
}

/// Compare `p, h, q, D_y E, D_y F` with `D` applied by finite differences to
/// `G`, `H`, `E` and `F` in the matching variable.
pub fn derivative_deviations(x: &Point, y: &Point, cfg: &DiffConfig) -> Result<DerivativeDeviations> {
    let n = x.dim();
    let kc = KernelConfig::default();
    let (xc, yc) = (x.clone(), y.clone());
    let g_x = scalar_field(n, |z| kc.green_hyperbolic(z, &yc));
    let g_y = scalar_field(n, |z| kc.green_hyperbolic(&xc, z));
    let h_x = scalar_field(n, |z| kc.green_prime(z, &yc));
    let e_y = multivector_field(n, |z| kc.e_kernel(&xc, z));
    let f_y = multivector_field(n, |z| kc.f_kernel(&xc, z));
    let dev = |closed: Multivector, fd: Multivector| (&closed - &fd).norm();
    Ok(DerivativeDeviations {
        p: dev(kc.p_kernel(x, y)?, dirac_left(&g_x, x, cfg)?),
        h: dev(kc.h_kernel(x, y)?, dirac_left(&g_y, y, cfg)?),
        q: dev(kc.q_kernel(x, y)?, dirac_left(&h_x, x, cfg)?),
        dy_e: dev(kc.dy_e_kernel(x, y)?, dirac_left(&e_y, y, cfg)?),
        dy_f: dev(kc.dy_f_kernel(x, y)?, dirac_left(&f_y, y, cfg)?),
    })
}

/// Residuals of the kernels' defining differential equations at one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelResiduals {
    /// `|M_x p(x, y)|`.
    pub p_x: f64,
    /// `|M_y h(x, y)|`.
    pub h_y: f64,
    /// `|M_y [y_n^{n-2} (E(x, y) L - F(x, y) L̂)]|` for the given constant `L`.
    pub point_source: f64,
    /// `|Δ_hyp G|` in `x`.
    pub g_x: f64,
    /// `|Δ_hyp G|` in `y`.
    pub g_y: f64,
    /// `|Δ' (y_n^{n-2} H)|` in `y`.
    pub h_prime_y: f64,
}

/// Evaluate [`KernelResiduals`] at `(x, y)` with density constant `l`.
pub fn kernel_residuals(x: &Point, y: &Point, l: &Multivector, cfg: &DiffConfig) -> Result<KernelResiduals> {
    let n = x.dim();
    let m = n as i32 - 2;
    let kc = KernelConfig::default();
    let (xc, yc) = (x.clone(), y.clone());
    let p_x = multivector_field(n, |z| kc.p_kernel(z, &yc));
    let h_y = multivector_field(n, |z| kc.h_kernel(&xc, z));
    let lh = l.hat();
    let source = multivector_field(n, |z| {
        let (e, f) = kc.e_f_kernels(&xc, z)?;
        Ok((&e * l - &f * &lh).scale(z.xn().powi(m)))
    });
    let g_x = scalar_field(n, |z| kc.green_hyperbolic(z, &yc));
    let g_y = scalar_field(n, |z| kc.green_hyperbolic(&xc, z));
    let hp_y = scalar_field(n, |z| Ok(z.xn().powi(m) * kc.green_prime(&xc, z)?));
    Ok(KernelResiduals {
        p_x: dirac_hodge(&p_x, x, cfg)?.norm(),
        h_y: dirac_hodge(&h_y, y, cfg)?.norm(),
        point_source: dirac_hodge(&source, y, cfg)?.norm(),
        g_x: laplacian_hyperbolic(&g_x, x, cfg)?.norm(),
        g_y: laplacian_hyperbolic(&g_y, y, cfg)?.norm(),
        h_prime_y: laplacian_prime(&hp_y, y, cfg)?.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c)
    }

    #[test]
    fn omega_values() {
        assert!((omega(2) - 2.0 * PI).abs() < 1e-15);
        assert!((omega(3) - 4.0 * PI).abs() < 1e-14);
        assert!((omega(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((omega(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn g_profile_examples() {
        assert_eq!(g_profile(1.0, 3).unwrap(), 0.0);
        assert!((g_profile(0.5, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!(g_profile(0.0, 3).is_err());
        assert!(g_profile(1.5, 3).is_err());
        // n = 4: (1 - t²)²/t³ integrates to -1/(2t²) - 2 ln t + t²/2
        let r: f64 = 0.3;
        let anti = |t: f64| -0.5 / (t * t) - 2.0 * t.ln() + 0.5 * t * t;
        assert!((g_profile(r, 4).unwrap() - (anti(1.0) - anti(r))).abs() < 1e-13);
    }

    #[test]
    fn axis_examples() {
        let x = p(&[0.0, 0.0, 1.0]);
        let y = p(&[0.0, 0.0, 2.0]);
        assert!((green_hyperbolic(&x, &y).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!((green_prime(&x, &y).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let e3 = Multivector::e(3, 3);
        assert!((e_kernel(&x, &y).unwrap() - e3.scale(1.0 / 3.0)).max_abs() < 1e-15);
        assert!((f_kernel(&x, &y).unwrap() - e3.scale(1.0 / 9.0)).max_abs() < 1e-15);
    }

    #[test]
    fn singular_pairs_rejected() {
        let x = p(&[0.1, 0.2, 0.5]);
        assert!(matches!(e_kernel(&x, &x), Err(Error::Singular { .. })));
        assert!(green_hyperbolic(&x, &p(&[0.0, 0.0, -1.0])).is_err());
    }

    #[test]
    fn poisson_boundary_form() {
        let y = p(&[0.2, -0.1, 0.7]);
        let x = p(&[1.0, 0.5, 0.0]);
        let d = x.distance(&y);
        let k = poisson_kernel(&x, &y).unwrap();
        let expect = poisson_prefactor(3) * 2.0 * 0.7f64.powi(2) / d.powi(4);
        assert!((k - expect).abs() < 1e-15 * expect);
        assert!(poisson_kernel(&p(&[1.0, 0.5, 0.1]), &y).is_err());
    }

    #[test]
    fn identities_vanish() {
        let x = p(&[0.3, -0.7, 0.4]);
        let y = p(&[-0.2, 0.5, 1.1]);
        assert!(teodorescu_identity_e(&x, &y).relative_error() < 1e-15);
        assert!(teodorescu_identity_f(&x, &y).relative_error() < 1e-15);
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let cfg = DiffConfig::default();
        for (x, y) in [
            (p(&[0.3, -0.7, 0.4]), p(&[-0.2, 0.5, 1.1])),
            (p(&[0.1, 0.2, -0.3, 0.9]), p(&[0.4, -0.5, 0.2, 0.6])),
        ] {
            let d = derivative_deviations(&x, &y, &cfg).unwrap();
            assert!(d.max() < 1e-7, "{d:?}");
        }
    }

    #[test]
    fn kernels_solve_their_equations() {
        let cfg = DiffConfig::default();
        let x = p(&[0.3, -0.7, 0.8]);
        let y = p(&[-0.2, 0.1, 1.1]);
        let l = Multivector::e(3, 1) + Multivector::blade(3, 0b110, 0.5) + Multivector::scalar(3, 0.3);
        let r = kernel_residuals(&x, &y, &l, &cfg).unwrap();
        assert!(r.p_x < 1e-5 && r.h_y < 1e-5 && r.point_source < 1e-5, "{r:?}");
        assert!(r.g_x < 1e-4 && r.g_y < 1e-4 && r.h_prime_y < 1e-4, "{r:?}");
    }
}
