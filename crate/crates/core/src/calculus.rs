//! Finite-difference differential operators on Clifford-valued fields.
//!
//! All derivatives are central differences refined by Richardson
//! extrapolation over step sizes `h, h/2, h/4, ...`. With `levels = 2` the
//! first-derivative truncation error is `O(h^4)`.
//!
//! Operators on upper half space shrink the step to `min(h0, x_n / 8)` and
//! refuse points with `x_n < 1e-6`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};

/// Smallest height at which the half-space operators are evaluated.
pub const MIN_HEIGHT: f64 = 1e-6;

/// A Clifford-valued field on (part of) `R^n`.
///
/// Implementations must be deterministic. Parallel callers additionally
/// require `Sync`.
pub trait CliffordField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &Point) -> Multivector;
    /// Points outside the domain are never passed to `eval` by the operators here.
    fn in_domain(&self, _x: &Point) -> bool {
        true
    }
}

impl<T: CliffordField + ?Sized> CliffordField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &Point) -> Multivector {
        (**self).eval(x)
    }
    fn in_domain(&self, x: &Point) -> bool {
        (**self).in_domain(x)
    }
}

impl<T: CliffordField + ?Sized> CliffordField for alloc::boxed::Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &Point) -> Multivector {
        (**self).eval(x)
    }
    fn in_domain(&self, x: &Point) -> bool {
        (**self).in_domain(x)
    }
}

/// A field given by a closure.
#[derive(Clone)]
pub struct FnField<F> {
    dim: usize,
    f: F,
    domain: Option<fn(&Point) -> bool>,
}

/// Wrap a closure as a [`CliffordField`] defined everywhere.
pub fn field<F: Fn(&Point) -> Multivector>(dim: usize, f: F) -> FnField<F> {
    FnField { dim, f, domain: None }
}

/// Wrap a closure defined on upper half space only.
pub fn upper_field<F: Fn(&Point) -> Multivector>(dim: usize, f: F) -> FnField<F> {
    FnField {
        dim,
        f,
        domain: Some(|x| x.xn() > 0.0),
    }
}

impl<F> FnField<F> {
    pub fn with_domain(mut self, domain: fn(&Point) -> bool) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl<F: Fn(&Point) -> Multivector> CliffordField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &Point) -> Multivector {
        (self.f)(x)
    }
    fn in_domain(&self, x: &Point) -> bool {
        self.domain.is_none_or(|d| d(x))
    }
}

/// Finite-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffConfig {
    /// Base step `h0` in coordinate units.
    pub step: f64,
    /// Number of step sizes combined by Richardson extrapolation (1 = plain central).
    pub richardson_levels: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            step: 1e-3,
            richardson_levels: 2,
        }
    }
}

impl DiffConfig {
    pub fn new(step: f64, richardson_levels: usize) -> Result<Self> {
        let cfg = DiffConfig {
            step,
            richardson_levels,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::Domain("finite-difference step must be positive"));
        }
        if !(1..=6).contains(&self.richardson_levels) {
            return Err(Error::Domain("richardson_levels must be in 1..=6"));
        }
        Ok(())
    }

    /// Step used at `x`: `min(h0, x_n / 8)` above the boundary plane.
    pub fn step_at(&self, x: &Point) -> f64 {
        let xn = x.xn();
        if xn > 0.0 {
            self.step.min(xn / 8.0)
        } else {
            self.step
        }
    }
}

/// Richardson table over `h, h/2, ...` for a method with even error powers.
fn richardson(levels: usize, h: f64, mut estimate: impl FnMut(f64) -> Result<Multivector>) -> Result<Multivector> {
    let mut prev: Vec<Multivector> = Vec::with_capacity(levels);
    let mut step = h;
    for i in 0..levels {
        let mut row = Vec::with_capacity(i + 1);
        row.push(estimate(step)?);
        let mut factor = 1.0;
        for k in 1..=i {
            factor *= 4.0;
            let diff = &row[k - 1] - &prev[k - 1];
            row.push(&row[k - 1] + &diff.scale(1.0 / (factor - 1.0)));
        }
        prev = row;
        step *= 0.5;
    }
    Ok(prev.pop().expect("levels >= 1"))
}

fn sample<F: CliffordField + ?Sized>(f: &F, x: &Point) -> Result<Multivector> {
    if !f.in_domain(x) {
        return Err(Error::StencilOutsideDomain);
    }
    Ok(f.eval(x))
}

fn check_field<F: CliffordField + ?Sized>(f: &F, x: &Point) -> Result<()> {
    if f.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}

fn check_height(x: &Point) -> Result<()> {
    if x.xn() < MIN_HEIGHT {
        return Err(Error::NotInUpperHalfSpace { xn: x.xn() });
    }
    Ok(())
}

/// `∂f/∂x_{axis+1}` at `x` (0-based `axis`).
pub fn partial<F: CliffordField + ?Sized>(f: &F, x: &Point, axis: usize, cfg: &DiffConfig) -> Result<Multivector> {
    check_field(f, x)?;
    cfg.validate()?;
    richardson(cfg.richardson_levels, cfg.step_at(x), |h| {
        let fp = sample(f, &x.shifted(axis, h))?;
        let fm = sample(f, &x.shifted(axis, -h))?;
        Ok((fp - fm).scale(0.5 / h))
    })
}

/// `∂²f/∂x_{axis+1}²` at `x`.
pub fn second_partial<F: CliffordField + ?Sized>(
    f: &F,
    x: &Point,
    axis: usize,
    cfg: &DiffConfig,
) -> Result<Multivector> {
    check_field(f, x)?;
    cfg.validate()?;
    let f0 = sample(f, x)?;
    richardson(cfg.richardson_levels, cfg.step_at(x), |h| {
        let fp = sample(f, &x.shifted(axis, h))?;
        let fm = sample(f, &x.shifted(axis, -h))?;
        Ok((fp + fm - f0.scale(2.0)).scale(1.0 / (h * h)))
    })
}

/// `Df = Σ e_j ∂f/∂x_j`.
pub fn dirac_left<F: CliffordField + ?Sized>(f: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    let n = x.dim();
    let mut out = Multivector::zero(n);
    for j in 0..n {
        out += &(&Multivector::e(n, j + 1) * &partial(f, x, j, cfg)?);
    }
    Ok(out)
}

/// `Σ ∂f/∂x_j e_j`.
pub fn dirac_right<F: CliffordField + ?Sized>(f: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    let n = x.dim();
    let mut out = Multivector::zero(n);
    for j in 0..n {
        out += &(&partial(f, x, j, cfg)? * &Multivector::e(n, j + 1));
    }
    Ok(out)
}

fn q_prime_term<F: CliffordField + ?Sized>(f: &F, x: &Point) -> Result<Multivector> {
    let n = x.dim() as f64;
    Ok(sample(f, x)?.q_prime().scale((n - 2.0) / x.xn()))
}

/// Dirac-Hodge operator `Mf = Df + ((n-2)/x_n) Q'(f)`.
pub fn dirac_hodge<F: CliffordField + ?Sized>(f: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    check_height(x)?;
    Ok(dirac_left(f, x, cfg)? + q_prime_term(f, x)?)
}

/// Right Dirac-Hodge operator `fM = Σ ∂f/∂x_j e_j + ((n-2)/x_n) Q'(f)`.
pub fn dirac_hodge_right<F: CliffordField + ?Sized>(f: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    check_height(x)?;
    Ok(dirac_right(f, x, cfg)? + q_prime_term(f, x)?)
}

/// Euclidean Laplacian, componentwise.
pub fn laplacian<F: CliffordField + ?Sized>(f: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    let mut out = Multivector::zero(x.dim());
    for j in 0..x.dim() {
        out += &second_partial(f, x, j, cfg)?;
    }
    Ok(out)
}

/// Hyperbolic Laplacian `Δu - ((n-2)/x_n) ∂u/∂x_n`.
pub fn laplacian_hyperbolic<F: CliffordField + ?Sized>(u: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    check_height(x)?;
    let n = x.dim();
    let dn = partial(u, x, n - 1, cfg)?;
    Ok(laplacian(u, x, cfg)? - dn.scale((n as f64 - 2.0) / x.xn()))
}

/// `Δ'u = Δu - ((n-2)/x_n) ∂u/∂x_n + ((n-2)/x_n^2) u`.
pub fn laplacian_prime<F: CliffordField + ?Sized>(u: &F, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    let base = laplacian_hyperbolic(u, x, cfg)?;
    let n = x.dim() as f64;
    Ok(base + sample(u, x)?.scale((n - 2.0) / (x.xn() * x.xn())))
}

/// Which operator a [`DerivedField`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    DiracLeft,
    DiracRight,
    DiracHodge,
    DiracHodgeRight,
    Laplacian,
    LaplacianHyperbolic,
    LaplacianPrime,
}

/// The field `x -> (op f)(x)`, evaluated by finite differences.
///
/// Evaluation errors surface as NaN coefficients, which quadrature and
/// nested operators reject.
pub struct DerivedField<F> {
    inner: F,
    op: Operator,
    cfg: DiffConfig,
}

impl<F: CliffordField> DerivedField<F> {
    pub fn new(inner: F, op: Operator, cfg: DiffConfig) -> Self {
        DerivedField { inner, op, cfg }
    }

    pub fn try_eval(&self, x: &Point) -> Result<Multivector> {
        apply(&self.inner, self.op, x, &self.cfg)
    }
}

/// Apply `op` to `f` at `x`.
pub fn apply<F: CliffordField + ?Sized>(f: &F, op: Operator, x: &Point, cfg: &DiffConfig) -> Result<Multivector> {
    match op {
        Operator::DiracLeft => dirac_left(f, x, cfg),
        Operator::DiracRight => dirac_right(f, x, cfg),
        Operator::DiracHodge => dirac_hodge(f, x, cfg),
        Operator::DiracHodgeRight => dirac_hodge_right(f, x, cfg),
        Operator::Laplacian => laplacian(f, x, cfg),
        Operator::LaplacianHyperbolic => laplacian_hyperbolic(f, x, cfg),
        Operator::LaplacianPrime => laplacian_prime(f, x, cfg),
    }
}

impl<F: CliffordField> CliffordField for DerivedField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &Point) -> Multivector {
        self.try_eval(x).unwrap_or_else(|_| {
            let mut m = Multivector::zero(x.dim());
            m.coeffs_mut().iter_mut().for_each(|c| *c = f64::NAN);
            m
        })
    }
    fn in_domain(&self, x: &Point) -> bool {
        self.inner.in_domain(x)
    }
}

/// Memoizes field values by exact coordinates; used for nested stencils.
pub struct CachedField<F> {
    inner: F,
    cache: RefCell<BTreeMap<Vec<u64>, Multivector>>,
}

impl<F: CliffordField> CachedField<F> {
    pub fn new(inner: F) -> Self {
        CachedField {
            inner,
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn evaluations(&self) -> usize {
        self.cache.borrow().len()
    }
}

impl<F: CliffordField> CliffordField for CachedField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &Point) -> Multivector {
        let key: Vec<u64> = x.coords().iter().map(|c| c.to_bits()).collect();
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let v = self.inner.eval(x);
        self.cache.borrow_mut().insert(key, v.clone());
        v
    }
    fn in_domain(&self, x: &Point) -> bool {
        self.inner.in_domain(x)
    }
}

/// Both sides of `-M²h = Δ_hyp P(h) + (Δ' Q(h)) e_n`.
pub struct MSquaredSides {
    pub lhs: Multivector,
    pub rhs: Multivector,
}

/// Evaluate `-M(Mh)` by nested differences and the decomposition
/// `Δ_hyp P(h) + (Δ' Q(h)) e_n`, sharing one cache of `h` values.
pub fn msquared_sides<F: CliffordField>(h: &F, x: &Point, cfg: &DiffConfig) -> Result<MSquaredSides> {
    check_height(x)?;
    let n = x.dim();
    let cached = CachedField::new(h);
    let mh = DerivedField::new(&cached, Operator::DiracHodge, *cfg);
    let lhs = -dirac_hodge(&mh, x, cfg)?;
    if !lhs.is_finite() {
        return Err(Error::StencilOutsideDomain);
    }
    let p = field(n, |z: &Point| cached.eval(z).p_part()).with_domain_of(h);
    let q = field(n, |z: &Point| cached.eval(z).q_part()).with_domain_of(h);
    let en = Multivector::e(n, n);
    let rhs = laplacian_hyperbolic(&p, x, cfg)? + &laplacian_prime(&q, x, cfg)? * &en;
    Ok(MSquaredSides { lhs, rhs })
}

/// `‖-M(Mh) - [Δ_hyp P(h) + (Δ' Q(h)) e_n]‖` at `x`.
pub fn msquared_decomposition_residual<F: CliffordField>(h: &F, x: &Point, cfg: &DiffConfig) -> Result<f64> {
    let s = msquared_sides(h, x, cfg)?;
    Ok((s.lhs - s.rhs).norm())
}

/// A closure field restricted to the domain of another field.
pub struct Restricted<'a, F, G: ?Sized> {
    f: FnField<F>,
    domain: &'a G,
}

impl<F> FnField<F> {
    pub fn with_domain_of<G: CliffordField + ?Sized>(self, other: &G) -> Restricted<'_, F, G> {
        Restricted { f: self, domain: other }
    }
}

impl<F: Fn(&Point) -> Multivector, G: CliffordField + ?Sized> CliffordField for Restricted<'_, F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn eval(&self, x: &Point) -> Multivector {
        self.f.eval(x)
    }
    fn in_domain(&self, x: &Point) -> bool {
        self.domain.in_domain(x) && self.f.in_domain(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Float;

    fn cfg() -> DiffConfig {
        DiffConfig::default()
    }

    fn x3() -> Point {
        Point::from_slice(&[0.3, -0.2, 0.9])
    }

    #[test]
    fn dirac_examples() {
        let n = 3;
        let f = field(n, |x: &Point| Multivector::scalar(n, x[0]));
        let d = dirac_left(&f, &x3(), &cfg()).unwrap();
        assert!((d - Multivector::e(n, 1)).max_abs() < 1e-10);

        let id = field(n, |x: &Point| x.to_multivector());
        let d = dirac_left(&id, &x3(), &cfg()).unwrap();
        assert!((d - Multivector::scalar(n, -3.0)).max_abs() < 1e-10);
        let d = dirac_right(&id, &x3(), &cfg()).unwrap();
        assert!((d - Multivector::scalar(n, -3.0)).max_abs() < 1e-10);

        let sq = field(n, |x: &Point| Multivector::scalar(n, x.norm_squared()));
        let d = dirac_left(&sq, &x3(), &cfg()).unwrap();
        assert!((d - x3().to_multivector().scale(2.0)).max_abs() < 1e-9);
    }

    #[test]
    fn dirac_hodge_examples() {
        let n = 3;
        let x = x3();
        let c = field(n, |_: &Point| Multivector::blade(n, 0b011, 2.0) + Multivector::e(n, 1));
        assert!(dirac_hodge(&c, &x, &cfg()).unwrap().max_abs() < 1e-12);
        let en = field(n, |_: &Point| Multivector::e(n, n));
        let m = dirac_hodge(&en, &x, &cfg()).unwrap();
        assert!((m - Multivector::scalar(n, 1.0 / x.xn())).max_abs() < 1e-12);
        let m = dirac_hodge_right(&en, &x, &cfg()).unwrap();
        assert!((m - Multivector::scalar(n, 1.0 / x.xn())).max_abs() < 1e-12);
    }

    #[test]
    fn weinstein_examples() {
        for n in 3..=5 {
            let mut c = alloc::vec![0.2; n];
            c[n - 1] = 0.8;
            let x = Point::from_slice(&c);
            let u = field(n, move |x: &Point| Multivector::scalar(n, x.xn().powi(n as i32 - 1)));
            assert!(laplacian_hyperbolic(&u, &x, &cfg()).unwrap().max_abs() < 1e-8);
            let u = field(n, |x: &Point| Multivector::scalar(n, x.xn()));
            assert!(laplacian_prime(&u, &x, &cfg()).unwrap().max_abs() < 1e-8);
            let u = field(n, |x: &Point| Multivector::scalar(n, x.xn() * x[0]));
            assert!(laplacian_prime(&u, &x, &cfg()).unwrap().max_abs() < 1e-8);
            let one = field(n, |_: &Point| Multivector::one(n));
            let v = laplacian_prime(&one, &x, &cfg()).unwrap();
            assert!((v.scalar_part() - (n as f64 - 2.0) / 0.64).abs() < 1e-8);
        }
    }

    #[test]
    fn richardson_gains_two_orders() {
        let n = 3;
        let f = field(n, |x: &Point| Multivector::scalar(n, (2.0 * x[0]).sin() * x.xn().exp()));
        let x = x3();
        let exact = 2.0 * (0.6f64).cos() * 0.9f64.exp();
        let err = |h: f64| {
            let c = DiffConfig::new(h, 2).unwrap();
            (partial(&f, &x, 0, &c).unwrap().scalar_part() - exact).abs()
        };
        let ratio = err(0.04) / err(0.02);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn refuses_boundary_points() {
        let n = 3;
        let f = field(n, |_: &Point| Multivector::one(n));
        let x = Point::from_slice(&[0.0, 0.0, 1e-7]);
        assert!(dirac_hodge(&f, &x, &cfg()).is_err());
        let g = upper_field(n, |_: &Point| Multivector::one(n));
        let x = Point::from_slice(&[0.0, 0.0, 1e-4]);
        // the step shrinks to x_n / 8 so the stencil stays inside
        assert!(dirac_left(&g, &x, &cfg()).is_ok());
    }

    #[test]
    fn msquared_examples() {
        let n = 3;
        let x = x3();
        let h = field(n, |x: &Point| Multivector::e(n, 1).scale(x.xn()));
        assert!(msquared_decomposition_residual(&h, &x, &cfg()).unwrap() < 1e-4);
        let h = field(n, |x: &Point| Multivector::blade(n, 0b011, x.norm_squared()));
        assert!(msquared_decomposition_residual(&h, &x, &cfg()).unwrap() < 1e-4);
    }
}
