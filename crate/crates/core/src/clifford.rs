//! Dense real Clifford algebra `Cl_n` with negative definite signature.
//!
//! A multivector stores `2^n` coefficients. Coefficient `b` belongs to the
//! blade `e_A` where `A` is the set of bits of `b` taken in ascending order,
//! so bit `k` stands for the generator `e_{k+1}`. Generators satisfy
//! `e_i e_j + e_j e_i = -2 δ_ij`.

use core::fmt;
use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use num_traits::Float;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 10;
/// Smallest supported algebra dimension; all kernels need `n > 2`.
pub const MIN_DIM: usize = 3;

type Coeffs = SmallVec<[f64; 32]>;
type Coords = SmallVec<[f64; 8]>;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Sign of the blade product `e_A e_B`, with `A`, `B` given as bit masks.
///
/// Counts the transpositions needed to sort the concatenated generator
/// string and adds one sign flip per generator that squares to `-1`.
#[inline]
pub fn blade_product_sign(a: usize, b: usize) -> f64 {
    let mut swaps = (a & b).count_ones();
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn grade_of(mask: usize) -> u32 {
    mask.count_ones()
}

/// An element of `Cl_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: Coeffs,
}

impl Multivector {
    /// The zero element of `Cl_dim`.
    ///
    /// Panics if `dim` is outside `[MIN_DIM, MAX_DIM]`.
    pub fn zero(dim: usize) -> Self {
        assert!(
            (MIN_DIM..=MAX_DIM).contains(&dim),
            "unsupported Clifford dimension {dim}"
        );
        Multivector {
            dim,
            coeffs: smallvec::smallvec![0.0; 1 << dim],
        }
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = s;
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// The generator `e_i`, `1 <= i <= dim`.
    pub fn e(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "generator index {i} out of range");
        Self::blade(dim, 1 << (i - 1), 1.0)
    }

    /// `coeff * e_A` for the blade with bit mask `mask`.
    pub fn blade(dim: usize, mask: usize, coeff: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[mask] = coeff;
        m
    }

    pub fn from_coeffs(dim: usize, coeffs: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(Error::InvalidCoefficients("length must be 2^n"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCoefficients("non-finite coefficient"));
        }
        Ok(Multivector {
            dim,
            coeffs: coeffs.iter().copied().collect(),
        })
    }

    /// Grade-1 element `x_1 e_1 + ... + x_n e_n`.
    pub fn from_vector(x: &Point) -> Self {
        let mut m = Self::zero(x.dim());
        for (k, c) in x.coords().iter().enumerate() {
            m.coeffs[1 << k] = *c;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Bit mask of `e_n`.
    #[inline]
    fn en_mask(&self) -> usize {
        1 << (self.dim - 1)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Geometric product, failing on a dimension mismatch.
    pub fn checked_mul(&self, rhs: &Multivector) -> Result<Multivector> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let mut out = Multivector::zero(self.dim);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                out.coeffs[a ^ b] += blade_product_sign(a, b) * ca * cb;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Multivector {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    fn map_blades(&self, sign: impl Fn(usize) -> f64) -> Multivector {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            *c *= sign(mask);
        }
        out
    }

    /// Reversion: `e_{j1}...e_{jr} -> e_{jr}...e_{j1}`.
    pub fn reverse(&self) -> Multivector {
        self.map_blades(|m| {
            let k = grade_of(m);
            if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// Grade involution: `(-1)^k` on grade `k`.
    pub fn grade_involution(&self) -> Multivector {
        self.map_blades(|m| if grade_of(m).is_multiple_of(2) { 1.0 } else { -1.0 })
    }

    /// Clifford conjugation: reversion composed with the grade involution.
    pub fn conjugate(&self) -> Multivector {
        self.map_blades(|m| {
            let k = grade_of(m);
            if (k * (k + 1) / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        })
    }

    /// The automorphism induced by `e_n -> -e_n`.
    pub fn hat(&self) -> Multivector {
        let en = self.en_mask();
        self.map_blades(|m| if m & en == 0 { 1.0 } else { -1.0 })
    }

    /// Split `A = P(A) + Q(A) e_n` with `P(A), Q(A)` in `Cl_{n-1}`.
    pub fn pq_split(&self) -> (Multivector, Multivector) {
        let en = self.en_mask();
        let mut p = Multivector::zero(self.dim);
        let mut q = Multivector::zero(self.dim);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if mask & en == 0 {
                p.coeffs[mask] = c;
            } else {
                // e_n is the highest generator, so e_A = e_{A \ n} e_n with no reordering.
                q.coeffs[mask ^ en] = c;
            }
        }
        (p, q)
    }

    pub fn p_part(&self) -> Multivector {
        self.pq_split().0
    }

    pub fn q_part(&self) -> Multivector {
        self.pq_split().1
    }

    /// Rebuild `p + q e_n` from its two `Cl_{n-1}` components.
    pub fn from_pq(p: &Multivector, q: &Multivector) -> Multivector {
        let en = p.en_mask();
        let mut out = p.p_part();
        for (mask, &c) in q.coeffs.iter().enumerate() {
            if mask & en == 0 {
                out.coeffs[mask | en] += c;
            }
        }
        out
    }

    /// `Q'(A) = -e_n Q(A) e_n`, which is the grade involution of `Q(A)`.
    pub fn q_prime(&self) -> Multivector {
        self.q_part().grade_involution()
    }

    /// True when no blade containing `e_n` carries weight above `tol`.
    pub fn in_subalgebra(&self, tol: f64) -> bool {
        let en = self.en_mask();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(m, c)| m & en == 0 || c.abs() <= tol)
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Euclidean norm of the coefficient array.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Projection onto grade `k`.
    pub fn grade(&self, k: u32) -> Multivector {
        self.map_blades(|m| if grade_of(m) == k { 1.0 } else { 0.0 })
    }

    /// Largest coefficient outside grade `k`.
    pub fn off_grade(&self, k: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(m, _)| grade_of(*m) != k)
            .fold(0.0, |acc, (_, c)| acc.max(c.abs()))
    }

    /// The grade-1 part as a point of `R^n`.
    pub fn vector_part(&self) -> Point {
        Point::new((0..self.dim).map(|k| self.coeffs[1 << k]))
    }

    /// Inverse of an element of the Clifford group (a product of vectors).
    ///
    /// Uses `a^{-1} = conj(a) / (a conj(a))`; fails if `a conj(a)` is not a
    /// nonzero scalar to relative tolerance `1e-9`.
    pub fn versor_inverse(&self) -> Result<Multivector> {
        let c = self.conjugate();
        let s = self * &c;
        let n2 = s.scalar_part();
        let scale = self.norm_squared();
        if scale == 0.0 || n2.abs() <= 1e-300 {
            return Err(Error::NotInvertible);
        }
        let mut rest = s.clone();
        rest.coeffs[0] = 0.0;
        if rest.max_abs() > 1e-9 * scale {
            return Err(Error::NotInvertible);
        }
        Ok(c.scale(1.0 / n2))
    }
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, mask: usize) -> &f64 {
        &self.coeffs[mask]
    }
}

fn assert_same_dim(a: &Multivector, b: &Multivector) {
    assert_eq!(a.dim, b.dim, "Clifford dimension mismatch");
}

impl Mul<&Multivector> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_same_dim(self, rhs);
        self.checked_mul(rhs).expect("dimensions checked")
    }
}

impl Mul<Multivector> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<&Multivector> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        &self * rhs
    }
}

impl Mul<Multivector> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self * &rhs
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Multivector {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
        self
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.scale(s)
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_same_dim(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_same_dim(self, rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Add<&Multivector> for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Add<&Multivector> for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: &Multivector) -> Multivector {
        self += rhs;
        self
    }
}

impl Sub<&Multivector> for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl Sub<&Multivector> for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: &Multivector) -> Multivector {
        self -= rhs;
        self
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            write!(f, "{}", c.abs())?;
            for k in 0..self.dim {
                if mask & (1 << k) != 0 {
                    write!(f, "e{}", k + 1)?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A point of `R^n`; the last coordinate is the height `x_n` above `R^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Coords,
}

impl Point {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        Point {
            coords: coords.into_iter().collect(),
        }
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        Point {
            coords: coords.iter().copied().collect(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Point {
            coords: smallvec::smallvec![0.0; dim],
        }
    }

    /// Unit vector along `e_i`, `1 <= i <= dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.coords[i - 1] = 1.0;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    /// The height coordinate `x_n`.
    #[inline]
    pub fn xn(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// Reflection about `R^{n-1}`: negates `x_n`.
    pub fn hat(&self) -> Point {
        let mut p = self.clone();
        let n = p.dim();
        p.coords[n - 1] = -p.coords[n - 1];
        p
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords.iter().zip(other.coords.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::new(self.coords.iter().map(|c| c * s))
    }

    /// `self + s * dir`.
    pub fn offset(&self, dir: &Point, s: f64) -> Point {
        Point::new(self.coords.iter().zip(dir.coords.iter()).map(|(a, b)| a + s * b))
    }

    /// `self + h e_j` for the 0-based axis `axis`.
    pub fn shifted(&self, axis: usize, h: f64) -> Point {
        let mut p = self.clone();
        p.coords[axis] += h;
        p
    }

    pub fn is_upper(&self) -> bool {
        self.xn() > 0.0
    }

    pub fn require_upper(&self) -> Result<()> {
        if self.xn() > 0.0 {
            Ok(())
        } else {
            Err(Error::NotInUpperHalfSpace { xn: self.xn() })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_vector(self)
    }

    /// `v^{-1} = -v / |v|^2`, since `v^2 = -|v|^2`.
    pub fn vector_inverse(&self) -> Result<Multivector> {
        let n2 = self.norm_squared();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain("inverse of the zero vector"));
        }
        Ok(self.scale(-1.0 / n2).to_multivector())
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(self.coords.iter().zip(rhs.coords.iter()).map(|(a, b)| a - b))
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(self.coords.iter().zip(rhs.coords.iter()).map(|(a, b)| a + b))
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

/// Free-function form of [`Point::vector_inverse`].
pub fn vector_inverse(v: &Point) -> Result<Multivector> {
    v.vector_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn e(n: usize, i: usize) -> Multivector {
        Multivector::e(n, i)
    }

    /// Sign of a generator word, computed by bubble-sorting it and
    /// contracting equal neighbours (`e_i e_i = -1`).
    fn word_sign(mut word: Vec<usize>) -> (f64, usize) {
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < word.len() {
                if word[i] > word[i + 1] {
                    word.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else if word[i] == word[i + 1] {
                    word.drain(i..i + 2);
                    sign = -sign;
                    changed = true;
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        (sign, word.iter().fold(0, |m, g| m | (1 << g)))
    }

    fn mask_word(mask: usize) -> Vec<usize> {
        (0..MAX_DIM).filter(|k| mask & (1 << k) != 0).collect()
    }

    #[test]
    fn sign_matches_string_sorting_oracle() {
        for a in 0..32usize {
            for b in 0..32usize {
                let mut w = mask_word(a);
                w.extend(mask_word(b));
                let (s, m) = word_sign(w);
                assert_eq!(m, a ^ b);
                assert_eq!(s, blade_product_sign(a, b), "a={a:b} b={b:b}");
            }
        }
    }

    #[test]
    fn generators_square_to_minus_one() {
        for n in 3..=5 {
            for i in 1..=n {
                assert_eq!(&e(n, i) * &e(n, i), Multivector::scalar(n, -1.0));
                for j in 1..=n {
                    if i != j {
                        let s = &e(n, i) * &e(n, j) + &e(n, j) * &e(n, i);
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn bivector_product_example() {
        // (e1 e2)(e2 e3) = e1 (e2 e2) e3 = -e1 e3
        let n = 3;
        let lhs = &(&e(n, 1) * &e(n, 2)) * &(&e(n, 2) * &e(n, 3));
        let (s, m) = word_sign(alloc::vec![0, 1, 1, 2]);
        assert_eq!(lhs, Multivector::blade(n, m, s));
        assert_eq!(lhs, -(&e(n, 1) * &e(n, 3)));
    }

    #[test]
    fn involution_examples() {
        let n = 3;
        let e12 = &e(n, 1) * &e(n, 2);
        assert_eq!(e12.reverse(), -e12.clone());
        assert_eq!(e(n, 1).reverse(), e(n, 1));
        assert_eq!(e(n, 1).conjugate(), -e(n, 1));
        assert_eq!(Multivector::one(n).conjugate(), Multivector::one(n));
        // conj(e1 e2) = (-1)^2 e2 e1 = -e1 e2
        assert_eq!(e12.conjugate(), &e(n, 2) * &e(n, 1));
        assert_eq!(e12.conjugate(), -e12.clone());
        assert_eq!((e(n, 1) + e(n, 3)).hat(), e(n, 1) - e(n, 3));
        assert_eq!(e12.hat(), e12);
    }

    #[test]
    fn pq_and_q_prime_examples() {
        let n = 3;
        let a = Multivector::scalar(n, 1.0) + e(n, 1) * 2.0 + e(n, 3) * 3.0;
        let (p, q) = a.pq_split();
        assert_eq!(p, Multivector::scalar(n, 1.0) + e(n, 1) * 2.0);
        assert_eq!(q, Multivector::scalar(n, 3.0));
        let e13 = &e(n, 1) * &e(n, 3);
        let (p, q) = e13.pq_split();
        assert!(p.is_zero());
        assert_eq!(q, e(n, 1));
        assert_eq!(e(n, 3).q_prime(), Multivector::one(n));
        assert_eq!(e13.q_prime(), -e(n, 1));
        // q_prime agrees with its defining product
        let direct = -(&(&e(n, 3) * &e13.q_part()) * &e(n, 3));
        assert_eq!(e13.q_prime(), direct);
        assert!((e(n, 1) + e(n, 2)).q_prime().is_zero());
    }

    #[test]
    fn norms_and_inverses() {
        let n = 3;
        assert!(((Multivector::one(n) + e(n, 1)).norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((&e(n, 1) * &e(n, 2)).norm(), 1.0);
        let prod = &(e(n, 1) * 2.0) * &(e(n, 2) * 3.0);
        assert_eq!(prod.norm(), 6.0);

        let v = Point::from_slice(&[2.0, 0.0, 0.0]);
        let inv = v.vector_inverse().unwrap();
        assert_eq!(inv, e(n, 1) * -0.5);
        assert_eq!(&v.to_multivector() * &inv, Multivector::one(n));
        let w = Point::from_slice(&[0.0, 0.0, -1.0]);
        assert_eq!(w.vector_inverse().unwrap(), e(n, 3));
        for j in 1..=n {
            assert_eq!(Point::unit(n, j).vector_inverse().unwrap(), -e(n, j));
        }
        assert!(Point::zeros(3).vector_inverse().is_err());
    }

    #[test]
    fn dimension_checks() {
        let a = Multivector::one(3);
        let b = Multivector::one(4);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        );
        assert!(Multivector::from_coeffs(3, &[0.0; 7]).is_err());
        assert!(Multivector::from_coeffs(3, &[f64::NAN; 8]).is_err());
        assert!(Multivector::from_coeffs(2, &[0.0; 4]).is_err());
    }

    #[test]
    fn display_uses_blade_names() {
        let n = 3;
        let m = Multivector::one(n) - &e(n, 1) * &e(n, 3) * 2.0;
        assert_eq!(alloc::format!("{m}"), "1 - 2e1e3");
    }
}
