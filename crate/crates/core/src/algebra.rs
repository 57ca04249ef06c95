//! Arithmetic in the normed real division algebras ℝ, ℂ, ℍ and 𝕆.
//!
//! Every algebra is produced from ℝ by iterated Cayley–Dickson doubling with
//! the product
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄)
//! ```
//!
//! which embeds ℂ and ℍ with the usual `i, j, k` table (`e1·e2 = e3`).
//! Coefficient 0 is the real part. Elements are stored inline in a fixed
//! eight-slot array so that values are `Copy` and never allocate.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported algebra dimension (the octonions).
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("unsupported algebra dimension {0}; expected one of 1, 2, 4, 8")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("the zero element has no inverse")]
    ZeroInverse,
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
}

/// Dimension of a normed division algebra: 1, 2, 4 or 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct AlgebraDim(u8);

impl AlgebraDim {
    pub const REAL: AlgebraDim = AlgebraDim(1);
    pub const COMPLEX: AlgebraDim = AlgebraDim(2);
    pub const QUATERNION: AlgebraDim = AlgebraDim(4);
    pub const OCTONION: AlgebraDim = AlgebraDim(8);

    pub const ALL: [AlgebraDim; 4] = [Self::REAL, Self::COMPLEX, Self::QUATERNION, Self::OCTONION];

    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        match n {
            1 | 2 | 4 | 8 => Ok(AlgebraDim(n as u8)),
            _ => Err(AlgebraError::UnsupportedDim(n)),
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Whether multiplication is associative (everything except 𝕆).
    pub fn is_associative(self) -> bool {
        self.0 <= 4
    }

    pub fn symbol(self) -> &'static str {
        match self.0 {
            1 => "R",
            2 => "C",
            4 => "H",
            _ => "O",
        }
    }
}

impl TryFrom<usize> for AlgebraDim {
    type Error = AlgebraError;
    fn try_from(n: usize) -> Result<Self, Self::Error> {
        AlgebraDim::new(n)
    }
}

impl From<AlgebraDim> for usize {
    fn from(d: AlgebraDim) -> usize {
        d.get()
    }
}

impl fmt::Display for AlgebraDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the `n`-dimensional division algebra.
///
/// Slots beyond `dim` are always zero, so derived equality compares exactly
/// the meaningful coefficients.
#[derive(Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    dim: AlgebraDim,
    coeffs: [f64; MAX_DIM],
}

impl AlgebraElement {
    pub fn zero(dim: AlgebraDim) -> Self {
        AlgebraElement { dim, coeffs: [0.0; MAX_DIM] }
    }

    pub fn one(dim: AlgebraDim) -> Self {
        Self::real(dim, 1.0)
    }

    /// The real scalar `x` embedded as `x·1`.
    pub fn real(dim: AlgebraDim, x: f64) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[0] = x;
        e
    }

    /// The `i`-th basis unit (`basis(dim, 0)` is `1`).
    ///
    /// # Panics
    /// If `i >= dim`.
    pub fn basis(dim: AlgebraDim, i: usize) -> Self {
        assert!(i < dim.get(), "basis index {i} out of range for dimension {dim}");
        let mut e = Self::zero(dim);
        e.coeffs[i] = 1.0;
        e
    }

    pub fn from_slice(dim: AlgebraDim, coeffs: &[f64]) -> Result<Self, AlgebraError> {
        if coeffs.len() != dim.get() {
            return Err(AlgebraError::CoefficientCount { expected: dim.get(), got: coeffs.len() });
        }
        let mut e = Self::zero(dim);
        e.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(e)
    }

    #[inline]
    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.dim.get()]
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        let n = self.dim.get();
        &mut self.coeffs[..n]
    }

    #[inline]
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in &mut out.coeffs[1..] {
            *c = -*c;
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimMismatch { left: self.dim.get(), right: other.dim.get() });
        }
        Ok(())
    }

    /// Cayley–Dickson product; fails on mismatched dimensions.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_dim(other)?;
        let n = self.dim.get();
        let mut out = Self::zero(self.dim);
        cd_mul(&self.coeffs[..n], &other.coeffs[..n], &mut out.coeffs[..n]);
        Ok(out)
    }

    /// `Re(conj(self) · other)`, which equals the Euclidean dot product of
    /// the coefficient vectors.
    pub fn checked_inner(&self, other: &Self) -> Result<f64, AlgebraError> {
        self.check_dim(other)?;
        Ok(self.dot(other))
    }

    /// Panicking variant of [`checked_inner`](Self::checked_inner).
    pub fn inner(&self, other: &Self) -> f64 {
        self.checked_inner(other).expect("inner product of mismatched dimensions")
    }

    #[inline]
    fn dot(&self, other: &Self) -> f64 {
        self.coeffs().iter().zip(other.coeffs()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `conj(a) / |a|²`.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(AlgebraError::ZeroInverse);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// Euclidean distance between coefficient vectors.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }
}

/// Recursive doubling product on coefficient slices of equal power-of-two
/// length ≤ 8.
fn cd_mul(a: &[f64], b: &[f64], out: &mut [f64]) {
    let len = a.len();
    if len == 1 {
        out[0] = a[0] * b[0];
        return;
    }
    let h = len / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);

    let mut s_bar = [0.0; MAX_DIM / 2];
    let mut r_bar = [0.0; MAX_DIM / 2];
    conj_into(s, &mut s_bar[..h]);
    conj_into(r, &mut r_bar[..h]);

    let mut t1 = [0.0; MAX_DIM / 2];
    let mut t2 = [0.0; MAX_DIM / 2];
    // first half: p r − s̄ q
    cd_mul(p, r, &mut t1[..h]);
    cd_mul(&s_bar[..h], q, &mut t2[..h]);
    for i in 0..h {
        out[i] = t1[i] - t2[i];
    }
    // second half: s p + q r̄
    cd_mul(s, p, &mut t1[..h]);
    cd_mul(q, &r_bar[..h], &mut t2[..h]);
    for i in 0..h {
        out[h + i] = t1[i] + t2[i];
    }
}

fn conj_into(x: &[f64], out: &mut [f64]) {
    out[0] = x[0];
    for i in 1..x.len() {
        out[i] = -x[i];
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.dim.symbol(), self.coeffs())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    /// # Panics
    /// On mismatched dimensions; use [`AlgebraElement::checked_mul`] to
    /// handle that case.
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("product of mismatched dimensions")
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(mut self, rhs: f64) -> Self {
        for c in self.coeffs_mut() {
            *c *= rhs;
        }
        self
    }
}

impl Mul<AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        rhs * self
    }
}

impl Div<f64> for AlgebraElement {
    type Output = AlgebraElement;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for AlgebraElement {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "sum of mismatched dimensions");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for AlgebraElement {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "difference of mismatched dimensions");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// Sum of an iterator of elements of the given dimension.
pub fn sum<I: IntoIterator<Item = AlgebraElement>>(dim: AlgebraDim, iter: I) -> AlgebraElement {
    iter.into_iter().fold(AlgebraElement::zero(dim), |acc, x| acc + x)
}

/// First basis triple `(a, b, c)` with `(e_a e_b) e_c ≠ e_a (e_b e_c)`, if any.
pub fn basis_associativity_witness(dim: AlgebraDim) -> Option<(usize, usize, usize)> {
    let n = dim.get();
    let unit = |i| AlgebraElement::basis(dim, i);
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                if (unit(a) * unit(b)) * unit(c) != unit(a) * (unit(b) * unit(c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> AlgebraElement {
        AlgebraElement::basis(AlgebraDim::new(dim).unwrap(), i)
    }

    #[test]
    fn real_product() {
        let d = AlgebraDim::REAL;
        let p = AlgebraElement::real(d, 2.0) * AlgebraElement::real(d, 3.0);
        assert_eq!(p.coeffs(), &[6.0]);
    }

    #[test]
    fn quaternion_table() {
        assert_eq!(e(4, 1) * e(4, 2), e(4, 3));
        assert_eq!(e(4, 2) * e(4, 3), e(4, 1));
        assert_eq!(e(4, 3) * e(4, 1), e(4, 2));
        assert_eq!(e(4, 2) * e(4, 1), -e(4, 3));
        for i in 1..4 {
            assert_eq!(e(4, i) * e(4, i), -e(4, 0));
        }
    }

    #[test]
    fn complex_embeds() {
        // (1 + 2i)(3 − i) = 5 + 5i
        let d = AlgebraDim::COMPLEX;
        let a = AlgebraElement::from_slice(d, &[1.0, 2.0]).unwrap();
        let b = AlgebraElement::from_slice(d, &[3.0, -1.0]).unwrap();
        assert_eq!((a * b).coeffs(), &[5.0, 5.0]);
    }

    #[test]
    fn octonion_units_square_to_minus_one() {
        for i in 1..8 {
            assert_eq!(e(8, i) * e(8, i), -e(8, 0));
        }
    }

    #[test]
    fn conj_basics() {
        let one = AlgebraElement::one(AlgebraDim::OCTONION);
        assert_eq!(one.conj(), one);
        for i in 1..8 {
            assert_eq!(e(8, i).conj(), -e(8, i));
        }
    }

    #[test]
    fn inner_and_norm() {
        assert_eq!(e(4, 1).inner(&e(4, 2)), 0.0);
        let z = AlgebraElement::from_slice(AlgebraDim::COMPLEX, &[3.0, 4.0]).unwrap();
        assert_eq!(z.norm(), 5.0);
    }

    #[test]
    fn inverses() {
        let two = AlgebraElement::real(AlgebraDim::REAL, 2.0);
        assert_eq!(two.inverse().unwrap().coeffs(), &[0.5]);
        assert_eq!(e(4, 1).inverse().unwrap(), -e(4, 1));
        assert_eq!(AlgebraElement::zero(AlgebraDim::QUATERNION).inverse(), Err(AlgebraError::ZeroInverse));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = e(2, 1);
        let b = e(4, 1);
        assert!(matches!(a.checked_mul(&b), Err(AlgebraError::DimMismatch { left: 2, right: 4 })));
        assert!(a.checked_inner(&b).is_err());
    }

    #[test]
    fn unsupported_dims() {
        for n in [0, 3, 5, 16] {
            assert_eq!(AlgebraDim::new(n), Err(AlgebraError::UnsupportedDim(n)));
        }
    }

    #[test]
    fn octonions_are_not_associative() {
        // direct enumeration over basis triples
        let mut witness = None;
        'outer: for a in 1..8 {
            for b in 1..8 {
                for c in 1..8 {
                    let l = (e(8, a) * e(8, b)) * e(8, c);
                    let r = e(8, a) * (e(8, b) * e(8, c));
                    if l != r {
                        witness = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        assert!(witness.is_some());
    }

    #[test]
    fn witness_only_for_octonions() {
        for d in AlgebraDim::ALL {
            assert_eq!(basis_associativity_witness(d).is_some(), d == AlgebraDim::OCTONION);
        }
    }

    #[test]
    fn quaternion_basis_associative() {
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert_eq!((e(4, a) * e(4, b)) * e(4, c), e(4, a) * (e(4, b) * e(4, c)));
                }
            }
        }
    }
}
