//! Möbius transforms of `R^n ∪ {∞}` in Vahlen form `x -> (ax + b)(cx + d)^{-1}`.
//!
//! A [`VahlenTransform`] is stored as a word of generators; the Clifford
//! coefficients `a, b, c, d` are obtained by multiplying the generator
//! matrices, so every stored transform is a group element by construction.
//!
//! Generator matrices (all with pseudo-determinant `a d̃ - b c̃ = 1`):
//!
//! | generator            | map                | matrix                                  |
//! |----------------------|--------------------|-----------------------------------------|
//! | translation by `t`   | `x + t`            | `[[1, t], [0, 1]]`                      |
//! | dilation by `λ > 0`  | `λ x`              | `[[√λ, 0], [0, 1/√λ]]`                  |
//! | rotation in `(i, j)` | `r x r̃`            | `[[r, 0], [0, r]]`, `r = cos(θ/2) + sin(θ/2) e_i e_j` |
//! | inversion            | `-x^{-1}`          | `[[0, 1], [-1, 0]]`                     |
//!
//! The inversion `-x^{-1} = x / |x|^2` keeps `x_n > 0`, so words built from
//! boundary translations, dilations, rotations of `R^{n-1}` and inversions
//! preserve upper half space.

use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{check_dim, Multivector, Point};
use crate::error::{Error, Result};

/// Relative size of `cx + d` below which `x` is treated as a pole.
const POLE_TOL: f64 = 1e-12;

/// One generator of the Möbius group.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Translation(Point),
    Dilation(f64),
    /// Rotation by `angle` in the plane of `e_i, e_j` (1-based, `i < j`).
    Rotation {
        i: usize,
        j: usize,
        angle: f64,
    },
    Inversion,
}

impl Generator {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Generator::Translation(t) => {
                if t.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: t.dim(),
                    });
                }
                if !t.is_finite() {
                    return Err(Error::Domain("non-finite translation"));
                }
            }
            Generator::Dilation(l) => {
                if !(l.is_finite() && *l > 0.0) {
                    return Err(Error::Domain("dilation factor must be positive"));
                }
            }
            Generator::Rotation { i, j, angle } => {
                if !(1 <= *i && i < j && *j <= n) || !angle.is_finite() {
                    return Err(Error::Domain("rotation plane must satisfy 1 <= i < j <= n"));
                }
            }
            Generator::Inversion => {}
        }
        Ok(())
    }

    /// True when the generator maps upper half space onto itself.
    pub fn preserves_upper_half_space(&self, n: usize) -> bool {
        match self {
            Generator::Translation(t) => t.xn() == 0.0,
            Generator::Dilation(_) | Generator::Inversion => true,
            Generator::Rotation { j, .. } => *j < n,
        }
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Translation(t) => Generator::Translation(-t),
            Generator::Dilation(l) => Generator::Dilation(1.0 / l),
            Generator::Rotation { i, j, angle } => Generator::Rotation {
                i: *i,
                j: *j,
                angle: -angle,
            },
            Generator::Inversion => Generator::Inversion,
        }
    }

    fn matrix(&self, n: usize) -> [Multivector; 4] {
        let zero = Multivector::zero(n);
        let one = Multivector::one(n);
        match self {
            Generator::Translation(t) => [one.clone(), t.to_multivector(), zero, one],
            Generator::Dilation(l) => {
                let s = l.sqrt();
                [
                    Multivector::scalar(n, s),
                    zero.clone(),
                    zero,
                    Multivector::scalar(n, 1.0 / s),
                ]
            }
            Generator::Rotation { i, j, angle } => {
                let half = 0.5 * angle;
                let r = Multivector::scalar(n, half.cos())
                    + Multivector::blade(n, (1 << (i - 1)) | (1 << (j - 1)), half.sin());
                [r.clone(), zero.clone(), zero, r]
            }
            Generator::Inversion => [zero.clone(), one.clone(), -one, zero],
        }
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            Generator::Translation(t) => Ok(x + t),
            Generator::Dilation(l) => Ok(x.scale(*l)),
            Generator::Rotation { i, j, angle } => {
                let (s, c) = angle.sin_cos();
                let mut y = x.clone();
                let (xi, xj) = (x[i - 1], x[j - 1]);
                // r x r̃ with r = cos(θ/2) + sin(θ/2) e_i e_j rotates e_i towards e_j.
                y.coords_mut()[i - 1] = c * xi - s * xj;
                y.coords_mut()[j - 1] = s * xi + c * xj;
                Ok(y)
            }
            Generator::Inversion => {
                let n2 = x.norm_squared();
                if n2 == 0.0 {
                    Err(Error::PointAtInfinity)
                } else {
                    Ok(x.scale(1.0 / n2))
                }
            }
        }
    }
}

/// Which part of the Möbius group a sampler draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// All generators: arbitrary translations and rotations.
    Full,
    /// Boundary translations, dilations, rotations fixing `e_n`, inversion.
    UpperHalfSpace,
}

/// A Möbius transform stored as a generator word with derived Vahlen coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct VahlenTransform {
    dim: usize,
    word: Vec<Generator>,
    a: Multivector,
    b: Multivector,
    c: Multivector,
    d: Multivector,
}

fn mat_mul(m: &[Multivector; 4], k: &[Multivector; 4]) -> [Multivector; 4] {
    [
        &m[0] * &k[0] + &m[1] * &k[2],
        &m[0] * &k[1] + &m[1] * &k[3],
        &m[2] * &k[0] + &m[3] * &k[2],
        &m[2] * &k[1] + &m[3] * &k[3],
    ]
}

fn first_nonzero(m: &Multivector) -> Option<f64> {
    m.coeffs().iter().copied().find(|c| c.abs() > 1e-14)
}

/// Inverse of an element of the Clifford group via `w̄ / |w|^2`.
fn clifford_group_inverse(w: &Multivector, scale: f64) -> Result<Multivector> {
    let n2 = w.norm_squared();
    if !(n2 > (POLE_TOL * scale.max(1.0)).powi(2)) {
        return Err(Error::PointAtInfinity);
    }
    Ok(w.conjugate().scale(1.0 / n2))
}

impl VahlenTransform {
    pub fn identity(dim: usize) -> Self {
        let one = Multivector::one(dim);
        let zero = Multivector::zero(dim);
        VahlenTransform {
            dim,
            word: Vec::new(),
            a: one.clone(),
            b: zero.clone(),
            c: zero,
            d: one,
        }
    }

    /// Build from a word; `word[0]` is applied first.
    pub fn from_word(dim: usize, word: Vec<Generator>) -> Result<Self> {
        check_dim(dim)?;
        for g in &word {
            g.validate(dim)?;
        }
        let mut m = {
            let id = Self::identity(dim);
            [id.a, id.b, id.c, id.d]
        };
        for g in &word {
            m = mat_mul(&g.matrix(dim), &m);
        }
        let [mut a, mut b, mut c, mut d] = m;
        let flip = match first_nonzero(&d).or_else(|| first_nonzero(&c)) {
            Some(v) => v < 0.0,
            None => false,
        };
        if flip {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        Ok(VahlenTransform { dim, word, a, b, c, d })
    }

    pub fn translation(t: &Point) -> Result<Self> {
        Self::from_word(t.dim(), alloc::vec![Generator::Translation(t.clone())])
    }

    pub fn dilation(dim: usize, lambda: f64) -> Result<Self> {
        Self::from_word(dim, alloc::vec![Generator::Dilation(lambda)])
    }

    pub fn rotation(dim: usize, i: usize, j: usize, angle: f64) -> Result<Self> {
        Self::from_word(dim, alloc::vec![Generator::Rotation { i, j, angle }])
    }

    /// The inversion `x -> -x^{-1}`.
    pub fn inversion(dim: usize) -> Result<Self> {
        Self::from_word(dim, alloc::vec![Generator::Inversion])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    /// Vahlen coefficients `(a, b, c, d)` after sign normalization.
    pub fn coefficients(&self) -> (&Multivector, &Multivector, &Multivector, &Multivector) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    /// Pseudo-determinant `a d̃ - b c̃`; equals `+1` for every word.
    ///
    /// This is the form that is multiplicative under matrix products. The
    /// mixed form `ã d - b̃ c` agrees with it on single generators but not on
    /// general words.
    pub fn pseudo_determinant(&self) -> Multivector {
        &self.a * &self.d.reverse() - &self.b * &self.c.reverse()
    }

    pub fn preserves_upper_half_space(&self) -> bool {
        self.word.iter().all(|g| g.preserves_upper_half_space(self.dim))
    }

    /// `apply(compose(outer, inner), x) = apply(outer, apply(inner, x))`.
    pub fn compose(outer: &VahlenTransform, inner: &VahlenTransform) -> Result<Self> {
        if outer.dim != inner.dim {
            return Err(Error::DimensionMismatch {
                expected: outer.dim,
                found: inner.dim,
            });
        }
        let mut word = inner.word.clone();
        word.extend(outer.word.iter().cloned());
        Self::from_word(outer.dim, word)
    }

    pub fn inverse(&self) -> Self {
        let word = self.word.iter().rev().map(Generator::inverse).collect();
        Self::from_word(self.dim, word).expect("inverse of a valid word is valid")
    }

    /// `cx + d`.
    pub fn denominator(&self, x: &Point) -> Multivector {
        &self.c * &x.to_multivector() + &self.d
    }

    /// Evaluate via the Vahlen coefficients: `(ax + b)(cx + d)^{-1}`.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.check_point(x)?;
        let xm = x.to_multivector();
        let num = &self.a * &xm + &self.b;
        let den = &self.c * &xm + &self.d;
        let inv = clifford_group_inverse(&den, num.norm())?;
        Ok((&num * &inv).vector_part())
    }

    /// Evaluate generator by generator.
    pub fn apply_word(&self, x: &Point) -> Result<Point> {
        self.check_point(x)?;
        let mut y = x.clone();
        for g in &self.word {
            y = g.apply(&y)?;
        }
        Ok(y)
    }

    /// Image of the sphere `|x - center| = radius` as `(center, radius)`.
    ///
    /// Fails if some inversion in the word would send a point of the sphere
    /// to infinity or turn the ball inside out (origin inside the ball).
    pub fn map_sphere(&self, center: &Point, radius: f64) -> Result<(Point, f64)> {
        self.check_point(center)?;
        let (mut c, mut r) = (center.clone(), radius);
        for g in &self.word {
            match g {
                Generator::Dilation(l) => {
                    c = c.scale(*l);
                    r *= l;
                }
                Generator::Inversion => {
                    let s = c.norm_squared() - r * r;
                    if !(s > POLE_TOL * r * r) {
                        return Err(Error::PointAtInfinity);
                    }
                    c = c.scale(1.0 / s);
                    r /= s;
                }
                _ => c = g.apply(&c)?,
            }
        }
        Ok((c, r))
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    fn denominator_checked(&self, u: &Point) -> Result<(Multivector, f64)> {
        self.check_point(u)?;
        let w = self.denominator(u);
        let n2 = w.norm_squared();
        let scale = (&self.a * &u.to_multivector() + &self.b).norm().max(1.0);
        if !(n2 > (POLE_TOL * scale).powi(2)) {
            return Err(Error::PointAtInfinity);
        }
        Ok((w, n2))
    }

    /// Evaluate a conformal factor at `u`.
    pub fn conformal_factor(&self, kind: ConformalKind, u: &Point) -> Result<ConformalValue> {
        let (w, n2) = self.denominator_checked(u)?;
        Ok(match kind {
            ConformalKind::J => ConformalValue::Clifford(w.reverse().scale(1.0 / n2)),
            ConformalKind::JPrime => ConformalValue::Clifford(w.conjugate().scale(1.0 / (n2 * n2))),
            ConformalKind::JPrimeReversed => ConformalValue::Clifford(w.reverse().scale(1.0 / (n2 * n2))),
            ConformalKind::J1 => ConformalValue::Real(1.0 / (n2 * n2)),
        })
    }

    /// `J(ψ, u) = (cu + d)~ / |cu + d|^2`.
    pub fn j(&self, u: &Point) -> Result<Multivector> {
        self.conformal_factor(ConformalKind::J, u)
            .map(ConformalValue::into_multivector)
    }

    /// `J'(ψ, u) = conj(cu + d) / |cu + d|^4`, the factor relating `M` before
    /// and after the change of variables.
    pub fn j_prime(&self, u: &Point) -> Result<Multivector> {
        self.conformal_factor(ConformalKind::JPrime, u)
            .map(ConformalValue::into_multivector)
    }

    /// `J_1(ψ, u) = 1 / |cu + d|^4`.
    pub fn j1(&self, u: &Point) -> Result<f64> {
        let (_, n2) = self.denominator_checked(u)?;
        Ok(1.0 / (n2 * n2))
    }
}

/// Conformal weights attached to a Möbius change of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConformalKind {
    J,
    /// Conjugated form `conj(cu + d) / |cu + d|^4`.
    JPrime,
    /// Reversed form `(cu + d)~ / |cu + d|^4`; coincides with `JPrime` when
    /// `cu + d` is even.
    JPrimeReversed,
    J1,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConformalValue {
    Clifford(Multivector),
    Real(f64),
}

impl ConformalValue {
    /// The value as an element of `Cl_dim`.
    pub fn to_multivector(&self, dim: usize) -> Multivector {
        match self {
            ConformalValue::Clifford(m) => m.clone(),
            ConformalValue::Real(r) => Multivector::scalar(dim, *r),
        }
    }

    fn into_multivector(self) -> Multivector {
        match self {
            ConformalValue::Clifford(m) => m,
            ConformalValue::Real(_) => unreachable!("real conformal factor"),
        }
    }
}

/// Reflection `y -> ŷ` about `R^{n-1}`.
pub fn hat_reflect(y: &Point) -> Point {
    y.hat()
}

fn checked_vector_inverse(v: &Point) -> Result<Multivector> {
    if v.norm_squared() == 0.0 {
        return Err(Error::Domain("coincident points"));
    }
    v.vector_inverse()
}

/// `(w1 - w4)^{-1}(w1 - w3)(w2 - w3)^{-1}(w2 - w4)`.
pub fn cross_ratio(w1: &Point, w2: &Point, w3: &Point, w4: &Point) -> Result<Multivector> {
    let i14 = checked_vector_inverse(&(w1 - w4))?;
    let i23 = checked_vector_inverse(&(w2 - w3))?;
    Ok(&(&(&i14 * &(w1 - w3).to_multivector()) * &i23) * &(w2 - w4).to_multivector())
}

/// Cayley transform `(e_n x + 1)(x + e_n)^{-1}` of upper half space onto the unit ball.
pub fn cayley(x: &Point) -> Result<Point> {
    let n = x.dim();
    check_dim(n)?;
    let en = Multivector::e(n, n);
    let shifted = x + &Point::unit(n, n);
    if shifted.norm_squared() == 0.0 {
        return Err(Error::PointAtInfinity);
    }
    let num = &en * &x.to_multivector() + Multivector::one(n);
    Ok((&num * &shifted.vector_inverse()?).vector_part())
}

/// Centered Cayley transform `e_n (x - y)(x - ŷ)^{-1}`, sending `y` to the origin.
pub fn cayley_centered(x: &Point, y: &Point) -> Result<Point> {
    let n = x.dim();
    check_dim(n)?;
    let diff_hat = x - &y.hat();
    if diff_hat.norm_squared() == 0.0 {
        return Err(Error::PointAtInfinity);
    }
    let en = Multivector::e(n, n);
    Ok((&(&en * &(x - y).to_multivector()) * &diff_hat.vector_inverse()?).vector_part())
}

/// Draw a random word of one to six generators.
///
/// Parameters: translations have coordinates uniform in `[-1, 1]` (last
/// coordinate zero for the half-space subgroup), dilation factors are
/// log-uniform in `[1/2, 2]`, rotation angles uniform in `[-π, π]` in a
/// random coordinate plane (inside `R^{n-1}` for the half-space subgroup).
pub fn sample_transform(dim: usize, seed: u64, subgroup: Subgroup) -> Result<VahlenTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_transform_with(dim, &mut rng, subgroup)
}

/// As [`sample_transform`] but drawing from a caller-owned generator.
pub fn sample_transform_with<R: Rng>(dim: usize, rng: &mut R, subgroup: Subgroup) -> Result<VahlenTransform> {
    check_dim(dim)?;
    let len = rng.gen_range(1..=6usize);
    let plane_dims = match subgroup {
        Subgroup::Full => dim,
        Subgroup::UpperHalfSpace => dim - 1,
    };
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let g = match rng.gen_range(0..4u8) {
            0 => {
                let mut t = Point::new((0..dim).map(|_| rng.gen_range(-1.0..=1.0)));
                if subgroup == Subgroup::UpperHalfSpace {
                    t.coords_mut()[dim - 1] = 0.0;
                }
                Generator::Translation(t)
            }
            1 => Generator::Dilation(rng.gen_range(-1.0..=1.0f64).exp2()),
            2 => {
                let i = rng.gen_range(1..plane_dims);
                let j = rng.gen_range(i + 1..=plane_dims);
                let angle = rng.gen_range(-core::f64::consts::PI..=core::f64::consts::PI);
                Generator::Rotation { i, j, angle }
            }
            _ => Generator::Inversion,
        };
        word.push(g);
    }
    VahlenTransform::from_word(dim, word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c)
    }

    fn close(a: &Point, b: &Point, tol: f64) -> bool {
        a.distance(b) <= tol * (1.0 + b.norm())
    }

    #[test]
    fn generator_examples() {
        let e3 = p(&[0.0, 0.0, 1.0]);
        let inv = VahlenTransform::inversion(3).unwrap();
        assert!(close(&inv.apply(&e3).unwrap(), &e3, 1e-15));
        let tr = VahlenTransform::translation(&p(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(tr.apply(&e3).unwrap(), p(&[1.0, 0.0, 1.0]));
        let dl = VahlenTransform::dilation(3, 2.0).unwrap();
        assert!(close(&dl.apply(&e3).unwrap(), &p(&[0.0, 0.0, 2.0]), 1e-15));
    }

    #[test]
    fn word_and_coefficients_agree() {
        for seed in 0..50 {
            for sub in [Subgroup::Full, Subgroup::UpperHalfSpace] {
                let psi = sample_transform(4, seed, sub).unwrap();
                let x = p(&[0.3, -0.2, 0.5, 0.7]);
                let a = psi.apply(&x).unwrap();
                let b = psi.apply_word(&x).unwrap();
                assert!(close(&a, &b, 1e-12), "seed {seed}: {a:?} vs {b:?}");
                let (ca, cb, cc, cd) = psi.coefficients();
                let scale = ca.norm() * cd.norm() + cb.norm() * cc.norm();
                let det = psi.pseudo_determinant();
                assert!((det.scalar_part() - 1.0).abs() < 1e-14 * scale.max(1.0));
                assert!(
                    det.coeffs()[1..].iter().all(|c| c.abs() < 1e-14 * scale.max(1.0)),
                    "seed {seed} {sub:?}: {det}"
                );
            }
        }
    }

    #[test]
    fn rotation_matches_sandwich() {
        let psi = VahlenTransform::rotation(3, 1, 2, 0.7).unwrap();
        let x = p(&[0.4, 0.9, 1.3]);
        let (a, _, _, _) = psi.coefficients();
        let sandwich = (&(a * &x.to_multivector()) * &a.reverse()).vector_part();
        assert!(close(&psi.apply_word(&x).unwrap(), &sandwich, 1e-15));
    }

    #[test]
    fn cross_ratio_example() {
        let e1 = |s: f64| p(&[s, 0.0, 0.0]);
        let cr = cross_ratio(&e1(0.0), &e1(1.0), &e1(2.0), &e1(3.0)).unwrap();
        assert!((cr.scalar_part() - 4.0 / 3.0).abs() < 1e-15);
        assert!(cr.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
        assert!(cross_ratio(&e1(0.0), &e1(1.0), &e1(2.0), &e1(0.0)).is_err());
    }

    #[test]
    fn cayley_examples() {
        let e3 = p(&[0.0, 0.0, 1.0]);
        assert!(cayley(&e3).unwrap().norm() < 1e-15);
        let y = p(&[0.0, 0.0, 2.0]);
        assert!((cayley_centered(&e3, &y).unwrap().norm() - 1.0 / 3.0).abs() < 1e-15);
        assert!(cayley_centered(&y, &y).unwrap().norm() == 0.0);
        let x = p(&[0.3, -0.4, 0.7]);
        assert!(cayley(&x).unwrap().norm() < 1.0);
    }

    #[test]
    fn identity_factors() {
        let id = VahlenTransform::identity(3);
        let u = p(&[0.2, 0.1, 0.8]);
        assert_eq!(id.j(&u).unwrap(), Multivector::one(3));
        assert_eq!(id.j_prime(&u).unwrap(), Multivector::one(3));
        assert_eq!(id.j1(&u).unwrap(), 1.0);
    }

    #[test]
    fn inversion_factor_norm() {
        let inv = VahlenTransform::inversion(3).unwrap();
        let u = p(&[0.2, 0.1, 0.8]);
        let j = inv.j(&u).unwrap();
        assert!((j.norm() - 1.0 / u.norm()).abs() < 1e-15);
        assert!((inv.j1(&u).unwrap() * u.norm().powi(4) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pole_is_reported() {
        let inv = VahlenTransform::inversion(3).unwrap();
        assert_eq!(inv.apply(&Point::zeros(3)), Err(Error::PointAtInfinity));
        assert_eq!(inv.apply_word(&Point::zeros(3)), Err(Error::PointAtInfinity));
    }

    #[test]
    fn invalid_generators_rejected() {
        assert!(VahlenTransform::dilation(3, -1.0).is_err());
        assert!(VahlenTransform::rotation(3, 2, 2, 0.1).is_err());
        assert!(VahlenTransform::translation(&p(&[1.0, 0.0])).is_err());
    }
}
