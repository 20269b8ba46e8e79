//! Deterministic quadrature rules for spheres, boxes, balls and the boundary
//! plane `R^{n-1}`, including excised and graded sphere rules for principal
//! values and near-singular evaluation.
//!
//! Sphere rules are products of one-dimensional rules in hyperspherical
//! angles `φ_1, ..., φ_{n-1}`:
//!
//! ```text
//! x_1 = cos φ_1
//! x_2 = sin φ_1 cos φ_2
//! ...
//! x_n = sin φ_1 ... sin φ_{n-1}
//! dσ  = sin^{n-2} φ_1 sin^{n-3} φ_2 ... sin φ_{n-2} dφ_1 ... dφ_{n-1}
//! ```
//!
//! Polar angles with odd weight exponent use Gauss-Legendre in `cos φ`
//! (the weight becomes a polynomial), even exponents use Gauss-Legendre in
//! `φ`. The azimuth uses the trapezoid rule with `2 * order` points. A
//! Householder reflection moves the polar axis onto a chosen pole.
//!
//! Sums use a fixed pairwise reduction tree, so results do not depend on
//! how callers schedule work.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, m as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m > 0, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Newton from the Tricomi-type initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(m);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        t.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|w| w * half).collect(),
    )
}

/// Composite Gauss-Legendre over consecutive panels `[b_k, b_{k+1}]`.
pub fn gauss_legendre_panels(m: usize, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(m * breaks.len());
    let mut weights = Vec::with_capacity(m * breaks.len());
    for pair in breaks.windows(2) {
        let (x, w) = gauss_legendre_on(m, pair[0], pair[1]);
        nodes.extend(x);
        weights.extend(w);
    }
    (nodes, weights)
}

/// Breakpoints `[start, s, 2s, 4s, ...] ∪ {end}` refining geometrically towards `start`.
pub fn geometric_breaks(start: f64, first: f64, end: f64) -> Vec<f64> {
    let mut b = vec![start];
    let mut t = start + first;
    while t < end - 1e-12 * (end - start) {
        b.push(t);
        t = start + 2.0 * (t - start);
    }
    b.push(end);
    b
}

/// One-dimensional polar rule on `[0, π]` including the weight `sin^j φ`.
fn polar_rule(order: usize, j: u32) -> (Vec<f64>, Vec<f64>) {
    if j % 2 == 1 {
        let (t, w) = gauss_legendre(order);
        let e = ((j - 1) / 2) as i32;
        // φ descending in t; keep φ ascending
        let phi: Vec<f64> = t.iter().rev().map(|t| t.acos()).collect();
        let wt: Vec<f64> = t
            .iter()
            .zip(w.iter())
            .rev()
            .map(|(t, w)| w * (1.0 - t * t).powi(e))
            .collect();
        (phi, wt)
    } else {
        let (phi, w) = gauss_legendre_on(order, 0.0, PI);
        let wt = phi
            .iter()
            .zip(w.iter())
            .map(|(p, w)| w * p.sin().powi(j as i32))
            .collect();
        (phi, wt)
    }
}

/// Unit directions and weights for `S^{m-1} ⊂ R^m`.
#[derive(Clone, Debug)]
struct AngularRule {
    dirs: Vec<Point>,
    weights: Vec<f64>,
}

/// Product rule on `S^{m-1}`. `first` overrides the rule for `φ_1` (nodes and
/// weights already multiplied by `sin^{m-2} φ_1`).
fn unit_sphere(m: usize, order: usize, first: Option<(Vec<f64>, Vec<f64>)>) -> AngularRule {
    assert!(m >= 2);
    let naz = 2 * order;
    let az: Vec<f64> = (0..naz).map(|k| 2.0 * PI * (k as f64 + 0.5) / naz as f64).collect();
    let waz = 2.0 * PI / naz as f64;
    // partial products: (coords so far, running sine product, weight)
    let mut partial: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), 1.0, 1.0)];
    let mut first = first;
    for k in 1..=m.saturating_sub(2) {
        let (phi, w) = if k == 1 {
            first.take().unwrap_or_else(|| polar_rule(order, (m - 2) as u32))
        } else {
            polar_rule(order, (m - 1 - k) as u32)
        };
        let mut next = Vec::with_capacity(partial.len() * phi.len());
        for (coords, s, wt) in &partial {
            for (p, pw) in phi.iter().zip(w.iter()) {
                let mut c = coords.clone();
                c.push(s * p.cos());
                next.push((c, s * p.sin(), wt * pw));
            }
        }
        partial = next;
    }
    let mut dirs = Vec::with_capacity(partial.len() * naz);
    let mut weights = Vec::with_capacity(partial.len() * naz);
    for (coords, s, wt) in &partial {
        for a in &az {
            let mut c = coords.clone();
            c.push(s * a.cos());
            c.push(s * a.sin());
            dirs.push(Point::new(c));
            weights.push(wt * waz);
        }
    }
    AngularRule { dirs, weights }
}

/// Householder reflection taking `e_1` to the unit vector `u`.
fn frame_to(u: &Point) -> impl Fn(&Point) -> Point + '_ {
    let mut v = u.scale(-1.0);
    v.coords_mut()[0] += 1.0;
    let vv = v.norm_squared();
    move |x: &Point| {
        if vv < 1e-30 {
            x.clone()
        } else {
            let s = 2.0 * v.dot(x) / vv;
            x.offset(&v, -s)
        }
    }
}

/// A region of `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum RegionSpec {
    Sphere {
        center: Point,
        radius: f64,
    },
    Box {
        lo: Point,
        hi: Point,
    },
    /// Disc of radius `radius` in `R^{n-1}` about `center` (a point of `R^{n-1}`).
    BoundaryDisc {
        center: Point,
        radius: f64,
    },
}

impl RegionSpec {
    pub fn sphere(center: Point, radius: f64) -> Result<Self> {
        let s = RegionSpec::Sphere { center, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn cube(lo: Point, hi: Point) -> Result<Self> {
        let s = RegionSpec::Box { lo, hi };
        s.validate()?;
        Ok(s)
    }

    /// Dimension of the ambient space `R^n`.
    pub fn dim(&self) -> usize {
        match self {
            RegionSpec::Sphere { center, .. } => center.dim(),
            RegionSpec::Box { lo, .. } => lo.dim(),
            RegionSpec::BoundaryDisc { center, .. } => center.dim() + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Sphere { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || !center.is_finite() {
                    return Err(Error::InvalidRegion("sphere radius must be positive"));
                }
                if center.xn() - radius <= 0.0 {
                    return Err(Error::InvalidRegion("sphere must lie in upper half space"));
                }
            }
            RegionSpec::Box { lo, hi } => {
                if lo.dim() != hi.dim() {
                    return Err(Error::InvalidRegion("box corners differ in dimension"));
                }
                if lo.coords().iter().zip(hi.coords()).any(|(a, b)| !(a < b)) {
                    return Err(Error::InvalidRegion("box corners must satisfy lo < hi"));
                }
                if lo.xn() <= 0.0 {
                    return Err(Error::InvalidRegion("box must lie in upper half space"));
                }
            }
            RegionSpec::BoundaryDisc { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || center.dim() < 2 {
                    return Err(Error::InvalidRegion("disc needs positive radius and n >= 3"));
                }
            }
        }
        Ok(())
    }

    fn sphere_parts(&self) -> Result<(&Point, f64)> {
        self.validate()?;
        match self {
            RegionSpec::Sphere { center, radius } => Ok((center, *radius)),
            _ => Err(Error::InvalidRegion("expected a sphere")),
        }
    }
}

/// Nodes, outward unit normals and positive surface weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRule {
    nodes: Vec<Point>,
    normals: Vec<Point>,
    weights: Vec<f64>,
    spacing: f64,
}

/// Nodes and positive volume weights.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeRule {
    nodes: Vec<Point>,
    weights: Vec<f64>,
    spacing: f64,
}

impl SurfaceRule {
    /// Assemble a rule from raw arrays, checking shapes, unit normals and
    /// positive finite weights. `spacing` is the typical node distance.
    pub fn from_parts(nodes: Vec<Point>, normals: Vec<Point>, weights: Vec<f64>, spacing: f64) -> Result<Self> {
        if nodes.len() != normals.len() || nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidRegion(
                "rule arrays must be non-empty and of equal length",
            ));
        }
        let n = nodes[0].dim();
        for ((x, nu), w) in nodes.iter().zip(&normals).zip(&weights) {
            if x.dim() != n || nu.dim() != n {
                return Err(Error::InvalidRegion("rule points differ in dimension"));
            }
            if !x.is_finite() || (nu.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidRegion("normals must be unit vectors"));
            }
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidRegion("weights must be positive"));
            }
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidRegion("spacing must be positive"));
        }
        Ok(SurfaceRule {
            nodes,
            normals,
            weights,
            spacing,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].dim()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Typical distance between neighbouring nodes.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum_f64(&self.weights)
    }

    pub fn in_upper_half_space(&self) -> bool {
        self.nodes.iter().all(|x| x.xn() > 0.0)
    }

    /// Smallest distance from `y` to a node.
    pub fn distance_to(&self, y: &Point) -> f64 {
        self.nodes.iter().map(|x| x.distance(y)).fold(f64::INFINITY, f64::min)
    }

    /// Fails if `y` is within `factor` node spacings of the surface.
    pub fn check_clearance(&self, y: &Point, factor: f64) -> Result<()> {
        let d = self.distance_to(y);
        if d < factor * self.spacing {
            return Err(Error::TooCloseToSurface {
                distance: d,
                spacing: self.spacing,
            });
        }
        Ok(())
    }
}

impl VolumeRule {
    pub fn from_parts(nodes: Vec<Point>, weights: Vec<f64>, spacing: f64) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidRegion(
                "rule arrays must be non-empty and of equal length",
            ));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidRegion("weights must be positive"));
        }
        Ok(VolumeRule {
            nodes,
            weights,
            spacing,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].dim()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum_f64(&self.weights)
    }
}

fn sphere_from_angular(center: &Point, radius: f64, pole: &Point, ang: AngularRule, spacing: f64) -> SurfaceRule {
    let n = center.dim();
    let frame = frame_to(pole);
    let scale = radius.powi(n as i32 - 1);
    let mut nodes = Vec::with_capacity(ang.dirs.len());
    let mut normals = Vec::with_capacity(ang.dirs.len());
    let mut weights = Vec::with_capacity(ang.dirs.len());
    for (d, w) in ang.dirs.iter().zip(ang.weights) {
        let nu = frame(d);
        nodes.push(center.offset(&nu, radius));
        normals.push(nu);
        weights.push(w * scale);
    }
    SurfaceRule {
        nodes,
        normals,
        weights,
        spacing,
    }
}

fn default_pole(n: usize) -> Point {
    Point::unit(n, 1)
}

fn unit_pole(pole: &Point) -> Result<Point> {
    let r = pole.norm();
    if !(r > 0.0) {
        return Err(Error::InvalidRegion("pole direction must be nonzero"));
    }
    Ok(pole.scale(1.0 / r))
}

/// Product Gauss-Legendre rule on a sphere (`order` polar points, `2 * order` azimuthal).
pub fn sphere_rule(spec: &RegionSpec, order: usize) -> Result<SurfaceRule> {
    let (c, r) = spec.sphere_parts()?;
    sphere_rule_oriented(spec, order, &default_pole(c.dim())).map(|mut s| {
        s.spacing = r * PI / order as f64;
        s
    })
}

/// [`sphere_rule`] with the polar axis along `pole`.
pub fn sphere_rule_oriented(spec: &RegionSpec, order: usize, pole: &Point) -> Result<SurfaceRule> {
    let (c, r) = spec.sphere_parts()?;
    check_order(order)?;
    let u = unit_pole(pole)?;
    let ang = unit_sphere(c.dim(), order, None);
    Ok(sphere_from_angular(c, r, &u, ang, r * PI / order as f64))
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > 4096 {
        return Err(Error::InvalidRegion("order must be in 1..=4096"));
    }
    Ok(())
}

/// Polar rule on `[start, π]` with panels refined geometrically towards `start`
/// and the surface weight `sin^{n-2} φ` included.
fn graded_polar(order: usize, start: f64, first: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let breaks = geometric_breaks(start, first, PI);
    let (phi, w) = gauss_legendre_panels(order, &breaks);
    let wt = phi
        .iter()
        .zip(w.iter())
        .map(|(p, w)| w * p.sin().powi(n as i32 - 2))
        .collect();
    (phi, wt)
}

fn on_sphere(c: &Point, r: f64, y: &Point) -> Result<Point> {
    if y.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: y.dim(),
        });
    }
    let d = y - c;
    if (d.norm() - r).abs() > 1e-10 * r {
        return Err(Error::Domain("point is not on the sphere"));
    }
    unit_pole(&d)
}

/// Sphere rule with the chordal cap `{x : |x - y| < ε}` about `y` removed.
///
/// The polar axis points at `y`, so the excision is exactly symmetric; the
/// polar angle runs over `[θ_ε, π]`, `θ_ε = 2 asin(ε / 2R)`, on panels
/// refined towards the cap edge, each with `order` points.
pub fn pv_sphere_rule(spec: &RegionSpec, order: usize, y: &Point, eps: f64) -> Result<SurfaceRule> {
    let (c, r) = spec.sphere_parts()?;
    check_order(order)?;
    if !(eps > 0.0 && eps < r) {
        return Err(Error::Domain("cap radius must satisfy 0 < eps < radius"));
    }
    let u = on_sphere(c, r, y)?;
    let theta = 2.0 * (eps / (2.0 * r)).asin();
    let polar = graded_polar(order, theta, theta, c.dim());
    let ang = unit_sphere(c.dim(), order, Some(polar));
    Ok(sphere_from_angular(c, r, &u, ang, r * theta / order as f64))
}

/// Area of the chordal cap `{x ∈ S : |x - y| < ε}` on a sphere of radius `r` in `R^n`.
pub fn cap_area(n: usize, r: f64, eps: f64) -> f64 {
    let theta = 2.0 * (eps / (2.0 * r)).asin();
    let (phi, w) = gauss_legendre_on(64, 0.0, theta);
    let polar: f64 = phi
        .iter()
        .zip(w.iter())
        .map(|(p, w)| w * p.sin().powi(n as i32 - 2))
        .sum();
    polar * crate::kernels::omega(n - 1) * r.powi(n as i32 - 1)
}

/// Sphere rule refined towards the point of the sphere in direction `pole`
/// from the center; used for targets at distance about `near` from the surface.
pub fn graded_sphere_rule(spec: &RegionSpec, order: usize, pole: &Point, near: f64) -> Result<SurfaceRule> {
    let (c, r) = spec.sphere_parts()?;
    check_order(order)?;
    if !(near > 0.0) {
        return Err(Error::Domain("grading scale must be positive"));
    }
    let u = unit_pole(pole)?;
    let first = (near / r).min(PI / 2.0);
    let polar = graded_polar(order, 0.0, first, c.dim());
    let ang = unit_sphere(c.dim(), order, Some(polar));
    Ok(sphere_from_angular(c, r, &u, ang, r * first / order as f64))
}

/// Tensor Gauss-Legendre rule on the boundary of a box (`order` points per face direction).
pub fn box_boundary_rule(spec: &RegionSpec, order: usize) -> Result<SurfaceRule> {
    spec.validate()?;
    check_order(order)?;
    let (lo, hi) = match spec {
        RegionSpec::Box { lo, hi } => (lo, hi),
        _ => return Err(Error::InvalidRegion("expected a box")),
    };
    let n = lo.dim();
    let rules: Vec<(Vec<f64>, Vec<f64>)> = (0..n).map(|k| gauss_legendre_on(order, lo[k], hi[k])).collect();
    let mut nodes = Vec::new();
    let mut normals = Vec::new();
    let mut weights = Vec::new();
    for axis in 0..n {
        for (side, value) in [(-1.0, lo[axis]), (1.0, hi[axis])] {
            let mut nu = Point::zeros(n);
            nu.coords_mut()[axis] = side;
            let others: Vec<usize> = (0..n).filter(|&k| k != axis).collect();
            for_each_tensor(&others, &rules, |coords, w| {
                let mut x = Point::zeros(n);
                for (k, c) in others.iter().zip(coords) {
                    x.coords_mut()[*k] = *c;
                }
                x.coords_mut()[axis] = value;
                nodes.push(x);
                normals.push(nu.clone());
                weights.push(w);
            });
        }
    }
    let spacing = (0..n).map(|k| hi[k] - lo[k]).fold(0.0, f64::max) / order as f64;
    Ok(SurfaceRule {
        nodes,
        normals,
        weights,
        spacing,
    })
}

fn for_each_tensor(axes: &[usize], rules: &[(Vec<f64>, Vec<f64>)], mut f: impl FnMut(&[f64], f64)) {
    let sizes: Vec<usize> = axes.iter().map(|&k| rules[k].0.len()).collect();
    let mut idx = vec![0usize; axes.len()];
    let mut coords = vec![0.0; axes.len()];
    loop {
        let mut w = 1.0;
        for (j, &k) in axes.iter().enumerate() {
            coords[j] = rules[k].0[idx[j]];
            w *= rules[k].1[idx[j]];
        }
        f(&coords, w);
        let mut j = 0;
        loop {
            if j == axes.len() {
                return;
            }
            idx[j] += 1;
            if idx[j] < sizes[j] {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Tensor Gauss-Legendre rule on a box.
pub fn box_rule(spec: &RegionSpec, order: usize) -> Result<VolumeRule> {
    spec.validate()?;
    check_order(order)?;
    let (lo, hi) = match spec {
        RegionSpec::Box { lo, hi } => (lo, hi),
        _ => return Err(Error::InvalidRegion("expected a box")),
    };
    let n = lo.dim();
    let rules: Vec<(Vec<f64>, Vec<f64>)> = (0..n).map(|k| gauss_legendre_on(order, lo[k], hi[k])).collect();
    let axes: Vec<usize> = (0..n).collect();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for_each_tensor(&axes, &rules, |c, w| {
        nodes.push(Point::from_slice(c));
        weights.push(w);
    });
    let spacing = (0..n).map(|k| hi[k] - lo[k]).fold(0.0, f64::max) / order as f64;
    Ok(VolumeRule {
        nodes,
        weights,
        spacing,
    })
}

/// Polar rule on a ball: `order` radial points times the sphere rule.
pub fn ball_rule(spec: &RegionSpec, order: usize) -> Result<VolumeRule> {
    let (c, r) = spec.sphere_parts()?;
    check_order(order)?;
    let n = c.dim();
    let ang = unit_sphere(n, order, None);
    let (rho, wr) = gauss_legendre_on(order, 0.0, r);
    let mut nodes = Vec::with_capacity(rho.len() * ang.dirs.len());
    let mut weights = Vec::with_capacity(rho.len() * ang.dirs.len());
    for (d, wd) in ang.dirs.iter().zip(&ang.weights) {
        for (p, w) in rho.iter().zip(&wr) {
            nodes.push(c.offset(d, *p));
            weights.push(wd * w * p.powi(n as i32 - 1));
        }
    }
    Ok(VolumeRule {
        nodes,
        weights,
        spacing: r * PI / order as f64,
    })
}

/// Polar rule on a ball centred at an interior point `y`.
///
/// Each ray `y + ρ ω` runs to the sphere at `ρ = -b + sqrt(b² - |d|² + R²)`
/// with `d = y - c`, `b = <d, ω>`. The Jacobian `ρ^{n-1}` cancels integrable
/// singularities of order `|x - y|^{1-n}` at `y`.
pub fn ball_rule_about(spec: &RegionSpec, y: &Point, order: usize) -> Result<VolumeRule> {
    let (c, r) = spec.sphere_parts()?;
    check_order(order)?;
    let n = c.dim();
    let d = y - c;
    if d.norm() >= r {
        return Err(Error::Domain("expansion point must lie inside the ball"));
    }
    let ang = unit_sphere(n, order, None);
    let (t, wt) = gauss_legendre_on(order, 0.0, 1.0);
    let mut nodes = Vec::with_capacity(t.len() * ang.dirs.len());
    let mut weights = Vec::with_capacity(t.len() * ang.dirs.len());
    let dd = d.norm_squared();
    for (w_dir, wd) in ang.dirs.iter().zip(&ang.weights) {
        let b = d.dot(w_dir);
        let reach = -b + (b * b - dd + r * r).sqrt();
        for (s, w) in t.iter().zip(&wt) {
            let rho = s * reach;
            nodes.push(y.offset(w_dir, rho));
            weights.push(wd * w * reach * rho.powi(n as i32 - 1));
        }
    }
    Ok(VolumeRule {
        nodes,
        weights,
        spacing: r * PI / order as f64,
    })
}

/// Truncated disc in `R^{n-1}`: nodes carry `x_n = 0`. Radial panels refine
/// geometrically towards the centre starting at `inner` (default `radius / 64`).
pub fn disc_rule(spec: &RegionSpec, order: usize, inner: Option<f64>) -> Result<VolumeRule> {
    spec.validate()?;
    check_order(order)?;
    let (c, radius) = match spec {
        RegionSpec::BoundaryDisc { center, radius } => (center, *radius),
        _ => return Err(Error::InvalidRegion("expected a boundary disc")),
    };
    let inner = inner.unwrap_or(radius / 64.0).min(radius);
    let breaks = geometric_breaks(0.0, inner, radius);
    let (rho, wr) = gauss_legendre_panels(order, &breaks);
    Ok(boundary_polar(
        c,
        order,
        &rho,
        &wr,
        |r| r,
        |_| 1.0,
        radius * PI / order as f64,
    ))
}

/// Rule for all of `R^{n-1}` through `r = scale * tan(α)`, `α ∈ [0, π/2)`,
/// centred at `center` (a point of `R^{n-1}`). Integrands decaying like
/// `|x|^{-2n+2}` about `center` become smooth trigonometric polynomials.
pub fn plane_rule(center: &Point, scale: f64, order: usize, panels: usize) -> Result<VolumeRule> {
    check_order(order)?;
    if !(scale > 0.0) || center.dim() < 2 || panels == 0 {
        return Err(Error::InvalidRegion(
            "plane rule needs scale > 0, n >= 3 and panels > 0",
        ));
    }
    let breaks: Vec<f64> = (0..=panels).map(|k| 0.5 * PI * k as f64 / panels as f64).collect();
    let (alpha, wa) = gauss_legendre_panels(order, &breaks);
    Ok(boundary_polar(
        center,
        order,
        &alpha,
        &wa,
        |a| scale * a.tan(),
        |a| scale / (a.cos() * a.cos()),
        scale * PI / order as f64,
    ))
}

fn boundary_polar(
    center: &Point,
    order: usize,
    params: &[f64],
    pweights: &[f64],
    radius_of: impl Fn(f64) -> f64,
    jacobian: impl Fn(f64) -> f64,
    spacing: f64,
) -> VolumeRule {
    let m = center.dim();
    let n = m + 1;
    let ang = unit_sphere(m, order, None);
    let mut nodes = Vec::with_capacity(params.len() * ang.dirs.len());
    let mut weights = Vec::with_capacity(params.len() * ang.dirs.len());
    for (d, wd) in ang.dirs.iter().zip(&ang.weights) {
        for (p, w) in params.iter().zip(pweights) {
            let r = radius_of(*p);
            let mut x = Point::zeros(n);
            for k in 0..m {
                x.coords_mut()[k] = center[k] + r * d[k];
            }
            nodes.push(x);
            weights.push(wd * w * jacobian(*p) * r.powi(m as i32 - 1));
        }
    }
    VolumeRule {
        nodes,
        weights,
        spacing,
    }
}

const LEAF: usize = 16;

fn pairwise<T>(
    lo: usize,
    hi: usize,
    leaf: &impl Fn(usize, usize) -> Result<T>,
    join: &impl Fn(T, T) -> T,
) -> Result<T> {
    if hi - lo <= LEAF {
        leaf(lo, hi)
    } else {
        let mid = lo + (hi - lo) / 2;
        let a = pairwise(lo, mid, leaf, join)?;
        let b = pairwise(mid, hi, leaf, join)?;
        Ok(join(a, b))
    }
}

/// Fixed-tree pairwise sum of `f(0), ..., f(len - 1)`.
///
/// Non-finite terms abort with [`Error::NonFiniteIntegrand`].
pub fn pairwise_sum(dim: usize, len: usize, f: impl Fn(usize) -> Result<Multivector>) -> Result<Multivector> {
    if len == 0 {
        return Ok(Multivector::zero(dim));
    }
    let leaf = |lo: usize, hi: usize| {
        let mut acc = Multivector::zero(dim);
        for i in lo..hi {
            let v = f(i)?;
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: i });
            }
            acc += &v;
        }
        Ok(acc)
    };
    pairwise(0, len, &leaf, &|a: Multivector, b: Multivector| a + b)
}

/// Scalar version of [`pairwise_sum`].
pub fn pairwise_sum_scalar(len: usize, f: impl Fn(usize) -> Result<f64>) -> Result<f64> {
    if len == 0 {
        return Ok(0.0);
    }
    let leaf = |lo: usize, hi: usize| {
        let mut acc = 0.0;
        for i in lo..hi {
            let v = f(i)?;
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { node: i });
            }
            acc += v;
        }
        Ok(acc)
    };
    pairwise(0, len, &leaf, &|a: f64, b: f64| a + b)
}

fn pairwise_sum_f64(v: &[f64]) -> f64 {
    pairwise_sum_scalar(v.len(), |i| Ok(v[i])).unwrap_or(f64::NAN)
}

/// `Σ w_i f(i, x_i, n(x_i))` over a surface rule.
pub fn integrate_surface(
    rule: &SurfaceRule,
    f: impl Fn(usize, &Point, &Point) -> Result<Multivector>,
) -> Result<Multivector> {
    pairwise_sum(rule.dim(), rule.len(), |i| {
        Ok(f(i, &rule.nodes[i], &rule.normals[i])?.scale(rule.weights[i]))
    })
}

/// `Σ w_i f(i, x_i)` over a volume rule.
pub fn integrate_volume(rule: &VolumeRule, f: impl Fn(usize, &Point) -> Result<Multivector>) -> Result<Multivector> {
    pairwise_sum(rule.dim(), rule.len(), |i| {
        Ok(f(i, &rule.nodes[i])?.scale(rule.weights[i]))
    })
}

/// `Σ w_i f(x_i)` for a scalar integrand over a volume rule.
pub fn integrate_volume_scalar(rule: &VolumeRule, f: impl Fn(&Point) -> Result<f64>) -> Result<f64> {
    pairwise_sum_scalar(rule.len(), |i| Ok(f(&rule.nodes[i])? * rule.weights[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::omega;

    fn sphere(c: &[f64], r: f64) -> RegionSpec {
        RegionSpec::sphere(Point::from_slice(c), r).unwrap()
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for m in [1, 2, 5, 16, 33, 64] {
            let (x, w) = gauss_legendre(m);
            for k in 0..2 * m {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "m={m} k={k}: {s}");
            }
        }
    }

    #[test]
    fn sphere_areas() {
        let s = sphere_rule(&sphere(&[0.0, 0.0, 2.0], 1.0), 24).unwrap();
        assert!((s.total_weight() - 4.0 * PI).abs() < 1e-12);
        for n in 3..=5 {
            let mut c = vec![0.0; n];
            c[n - 1] = 3.0;
            let s = sphere_rule(&sphere(&c, 0.5), 10).unwrap();
            let area = omega(n) * 0.5f64.powi(n as i32 - 1);
            assert!((s.total_weight() - area).abs() < 1e-12 * area, "n={n}");
            for nu in s.normals() {
                assert!((nu.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn normals_integrate_to_zero_and_divergence() {
        let spec = sphere(&[0.1, 0.2, 2.0], 0.7);
        let s = sphere_rule(&spec, 24).unwrap();
        let v = integrate_surface(&s, |_, _, nu| Ok(nu.to_multivector())).unwrap();
        assert!(v.max_abs() < 1e-12);
        let c = Point::from_slice(&[0.1, 0.2, 2.0]);
        let flux = integrate_surface(&s, |_, x, nu| Ok(Multivector::scalar(3, (x - &c).dot(nu)))).unwrap();
        let vol = 4.0 * PI / 3.0 * 0.7f64.powi(3);
        assert!((flux.scalar_part() - 3.0 * vol).abs() < 1e-10);
    }

    #[test]
    fn volumes() {
        let b = RegionSpec::cube(Point::from_slice(&[0.0, 0.0, 1.0]), Point::from_slice(&[1.0, 1.0, 2.0])).unwrap();
        assert!((box_rule(&b, 4).unwrap().total_weight() - 1.0).abs() < 1e-14);
        let bb = box_boundary_rule(&b, 4).unwrap();
        assert!((bb.total_weight() - 6.0).abs() < 1e-13);
        let ball = sphere(&[0.0, 0.0, 2.0], 1.0);
        assert!((ball_rule(&ball, 12).unwrap().total_weight() - 4.0 * PI / 3.0).abs() < 1e-10);
        let y = Point::from_slice(&[0.3, -0.2, 2.4]);
        let about = ball_rule_about(&ball, &y, 16).unwrap();
        assert!((about.total_weight() - 4.0 * PI / 3.0).abs() < 1e-8);
    }

    #[test]
    fn pv_rule_area_bookkeeping() {
        let spec = sphere(&[0.0, 0.0, 2.0], 1.0);
        let y = Point::from_slice(&[1.0, 0.0, 2.0]);
        for eps in [0.1, 0.05] {
            let s = pv_sphere_rule(&spec, 12, &y, eps).unwrap();
            let expect = 4.0 * PI - cap_area(3, 1.0, eps);
            assert!((s.total_weight() - expect).abs() < 1e-12);
            // the chordal cap has area π ε² on a sphere in R³
            assert!((cap_area(3, 1.0, eps) - PI * eps * eps).abs() < 1e-14);
            assert!(s.distance_to(&y) >= eps * (1.0 - 1e-12));
        }
        assert!(pv_sphere_rule(&spec, 12, &y, 1.5).is_err());
        assert!(pv_sphere_rule(&spec, 12, &Point::from_slice(&[0.0, 0.0, 2.0]), 0.1).is_err());
    }

    #[test]
    fn disc_gaussian() {
        let spec = RegionSpec::BoundaryDisc {
            center: Point::from_slice(&[0.0, 0.0]),
            radius: 8.0,
        };
        let d = disc_rule(&spec, 16, Some(0.5)).unwrap();
        let v = integrate_volume_scalar(&d, |x| Ok((-x.norm_squared()).exp())).unwrap();
        assert!((v - PI).abs() < 1e-10);
        assert!(d.nodes().iter().all(|x| x.xn() == 0.0));
        let p = plane_rule(&Point::from_slice(&[0.0, 0.0]), 1.0, 24, 4).unwrap();
        let v = integrate_volume_scalar(&p, |x| Ok(1.0 / (1.0 + x.norm_squared()).powi(2))).unwrap();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let s = sphere_rule(&sphere(&[0.0, 0.0, 2.0], 1.0), 4).unwrap();
        let r = integrate_surface(&s, |i, _, _| {
            Ok(Multivector::scalar(3, if i == 5 { f64::NAN } else { 1.0 }))
        });
        assert_eq!(r, Err(Error::NonFiniteIntegrand { node: 5 }));
    }

    #[test]
    fn invalid_regions() {
        assert!(RegionSpec::sphere(Point::from_slice(&[0.0, 0.0, 0.5]), 0.5).is_err());
        assert!(RegionSpec::cube(Point::from_slice(&[0.0, 0.0, 0.0]), Point::from_slice(&[1.0, 1.0, 1.0])).is_err());
    }
}
