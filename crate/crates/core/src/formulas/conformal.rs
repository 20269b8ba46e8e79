//! Conformal covariance of `M`, `Δ_hyp` and `Δ'` under Möbius maps of upper
//! half space, and the power functions generated by inversion.
//!
//! For a half-space preserving `ψ` with Vahlen denominator `w = cv + d`:
//!
//! - `M[J(ψ, v) f(ψ(v))] = J'(ψ, v) (Mf)(ψ(v))`, `J = w̃ / |w|²`,
//!   `J' = conj(w) / |w|⁴`; in particular `J f∘ψ` is hypermonogenic with `f`.
//! - `L[φ∘ψ](v) = J_1(ψ, v) (Lφ)(ψ(v))` for `L ∈ {Δ_hyp, Δ'}`, `J_1 = |w|^{-4}`.

use alloc::vec::Vec;

use num_traits::Float;

use super::volume::nan;
use super::{cauchy_full, eval_field, FormulaId};
use crate::calculus::{apply, dirac_hodge, CliffordField, DiffConfig, Operator};
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::mobius::VahlenTransform;
use crate::quadrature::{sphere_rule, RegionSpec};

/// How a field is pulled back along `ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceMode {
    /// `v ↦ f(ψ(v))`.
    Plain,
    /// `v ↦ J(ψ, v) f(ψ(v))`.
    Weighted,
}

/// Pull-back of a field along a Möbius transform.
pub struct TransformedField<'a, F> {
    pub inner: F,
    pub psi: &'a VahlenTransform,
    pub mode: CovarianceMode,
}

impl<F: CliffordField> TransformedField<'_, F> {
    pub fn try_eval(&self, v: &Point) -> Result<Multivector> {
        let u = self.psi.apply(v)?;
        let fu = eval_field(&self.inner, &u)?;
        Ok(match self.mode {
            CovarianceMode::Plain => fu,
            CovarianceMode::Weighted => &self.psi.j(v)? * &fu,
        })
    }
}

impl<F: CliffordField> CliffordField for TransformedField<'_, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, v: &Point) -> Multivector {
        self.try_eval(v).unwrap_or_else(|_| nan(self.dim()))
    }
    fn in_domain(&self, v: &Point) -> bool {
        self.psi.apply(v).map(|u| self.inner.in_domain(&u)).unwrap_or(false)
    }
}

fn check_probe(psi: &VahlenTransform, v: &Point) -> Result<()> {
    v.require_upper()?;
    // Stay clear of the pole: |cv + d| must not be tiny.
    let w = psi.denominator(v).norm();
    if !(w > 1e-6) {
        return Err(Error::PointAtInfinity);
    }
    Ok(())
}

/// `max_v ‖M[J(ψ, v) f(ψ(v))] - J'(ψ, v) (Mf)(ψ(v))‖` over the probes.
///
/// With `m_f = None` the right-hand side is dropped, which is the check for
/// hypermonogenic `f`.
pub fn conformal_covariance_residual<F, G>(
    f: &F,
    m_f: Option<&G>,
    psi: &VahlenTransform,
    probes: &[Point],
    cfg: &DiffConfig,
) -> Result<f64>
where
    F: CliffordField,
    G: CliffordField + ?Sized,
{
    let pulled = TransformedField {
        inner: f,
        psi,
        mode: CovarianceMode::Weighted,
    };
    let mut worst = 0.0f64;
    for v in probes {
        check_probe(psi, v)?;
        let mut r = dirac_hodge(&pulled, v, cfg)?;
        if let Some(mf) = m_f {
            let u = psi.apply(v)?;
            r -= &(&psi.j_prime(v)? * &eval_field(mf, &u)?);
        }
        if !r.is_finite() {
            return Err(Error::Domain("pulled-back field failed near a probe"));
        }
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

/// Laplacian used by [`laplacian_covariance_residual`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    Hyperbolic,
    Prime,
}

impl LaplacianKind {
    fn operator(self) -> Operator {
        match self {
            LaplacianKind::Hyperbolic => Operator::LaplacianHyperbolic,
            LaplacianKind::Prime => Operator::LaplacianPrime,
        }
    }
}

/// `max_v ‖L[φ∘ψ](v) - J_1(ψ, v) (Lφ)(ψ(v))‖` with both sides by finite differences.
pub fn laplacian_covariance_residual<F: CliffordField>(
    phi: &F,
    psi: &VahlenTransform,
    probes: &[Point],
    kind: LaplacianKind,
    cfg: &DiffConfig,
) -> Result<f64> {
    let pulled = TransformedField {
        inner: phi,
        psi,
        mode: CovarianceMode::Plain,
    };
    let op = kind.operator();
    let mut worst = 0.0f64;
    for v in probes {
        check_probe(psi, v)?;
        let lhs = apply(&pulled, op, v, cfg)?;
        let u = psi.apply(v)?;
        let rhs = apply(phi, op, &u, cfg)?.scale(psi.j1(v)?);
        let r = (&lhs - &rhs).norm();
        if !r.is_finite() {
            return Err(Error::Domain("pulled-back field failed near a probe"));
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Cauchy reconstruction of `J(ψ, ·) f∘ψ` at `v` over the preimage sphere
/// `ψ^{-1}(∂K)`, `K` the ball `(center, radius)`. Returns
/// `(reconstruction, J(ψ, v) f(ψ(v)))`.
pub fn transformed_cauchy<F: CliffordField>(
    f: &F,
    psi: &VahlenTransform,
    center: &Point,
    radius: f64,
    order: usize,
    v: &Point,
) -> Result<(Multivector, Multivector)> {
    if !psi.preserves_upper_half_space() {
        return Err(Error::Domain("transformed Cauchy formula needs a half-space transform"));
    }
    let (c, r) = psi.inverse().map_sphere(center, radius)?;
    let spec = RegionSpec::sphere(c, r)?;
    let rule = sphere_rule(&spec, order)?;
    let pulled = TransformedField {
        inner: f,
        psi,
        mode: CovarianceMode::Weighted,
    };
    let n = v.dim();
    let got = cauchy_full(&pulled, &rule, v, FormulaId::CauchyFull.reference_constant(n))?;
    Ok((got, pulled.try_eval(v)?))
}

/// Power functions generated from `-v^{-1} e_1` by inversion and
/// `e_1`-derivatives:
///
/// - `k = 0`: `-e_1`;
/// - `k = -m < 0`: `-(v^{-1} e_1)^m`, proportional to `∂^{m-1}_{v_1}` of the `k = -1` case;
/// - `k > 0`: `v^{-1} (-v e_1)^{k+1}`, the `J`-weighted inversion image of the `k' = -k-1` case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerFunction {
    pub dim: usize,
    pub k: i32,
}

impl PowerFunction {
    pub fn new(dim: usize, k: i32) -> Result<Self> {
        crate::clifford::check_dim(dim)?;
        if k.unsigned_abs() > 64 {
            return Err(Error::Domain("power function index out of range"));
        }
        Ok(PowerFunction { dim, k })
    }

    pub fn try_eval(&self, v: &Point) -> Result<Multivector> {
        power_function(self.k, v)
    }
}

impl CliffordField for PowerFunction {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, v: &Point) -> Multivector {
        self.try_eval(v).unwrap_or_else(|_| nan(self.dim))
    }
    fn in_domain(&self, v: &Point) -> bool {
        v.norm_squared() > 0.0
    }
}

fn power(base: &Multivector, m: u32) -> Multivector {
    let mut out = Multivector::one(base.dim());
    for _ in 0..m {
        out = &out * base;
    }
    out
}

/// See [`PowerFunction`].
pub fn power_function(k: i32, v: &Point) -> Result<Multivector> {
    let n = v.dim();
    crate::clifford::check_dim(n)?;
    let e1 = Multivector::e(n, 1);
    if k == 0 {
        return Ok(-e1);
    }
    if k.unsigned_abs() > 64 {
        return Err(Error::Domain("power function index out of range"));
    }
    let inv = v.vector_inverse()?;
    if k < 0 {
        Ok(-power(&(&inv * &e1), k.unsigned_abs()))
    } else {
        let vm = v.to_multivector();
        Ok(&inv * &power(&-(&vm * &e1), k as u32 + 1))
    }
}

/// Probes `(a, b, 1 + t)` spread over a box above the boundary.
pub fn default_probes(n: usize, count: usize) -> Vec<Point> {
    (0..count)
        .map(|i| {
            let t = i as f64 / count.max(1) as f64;
            Point::new((0..n).map(|k| {
                if k == n - 1 {
                    0.8 + 0.6 * t
                } else {
                    0.3 * ((k + 1) as f64 * (1.0 + 5.0 * t)).sin()
                }
            }))
        })
        .collect()
}
