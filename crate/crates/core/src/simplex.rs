//! Frames of vectors `λ_0, …, λ_{m−1}` in a division algebra, and the
//! symmetric simplex frame with `⟨λ_k, λ_l⟩ = −1/n` for `k ≠ l`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{self, AlgebraDim, AlgebraElement, AlgebraError};

/// Tolerance used to recognise the symmetric simplex frame.
pub const STANDARD_FRAME_TOL: f64 = 1e-12;

/// Relative residual above which a tuple is rejected as lying off
/// `Span(λ, 1)`.
pub const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operation requires the symmetric simplex frame")]
    NonStandardFrame,
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("tuple is not in Span(λ, 1): re-embedding residual {residual:.3e}")]
    NotInSpan { residual: f64 },
}

/// An ordered list of vectors in the algebra.
///
/// Frames built by [`build_lambda`] are the symmetric simplex frame. Frames
/// built with [`LambdaFrame::new`] are arbitrary (used by the generalized
/// varieties), may be empty and may contain zero vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFrame {
    dim: AlgebraDim,
    vectors: Vec<AlgebraElement>,
}

impl LambdaFrame {
    pub fn new(dim: AlgebraDim, vectors: Vec<AlgebraElement>) -> Result<Self, SimplexError> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(AlgebraError::DimMismatch { left: dim.get(), right: v.dim().get() }.into());
        }
        Ok(LambdaFrame { dim, vectors })
    }

    /// Frame from raw coefficient rows, each of length `dim`.
    pub fn from_rows(dim: AlgebraDim, rows: &[Vec<f64>]) -> Result<Self, SimplexError> {
        let vectors = rows.iter().map(|r| AlgebraElement::from_slice(dim, r)).collect::<Result<Vec<_>, _>>()?;
        Ok(LambdaFrame { dim, vectors })
    }

    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }

    pub fn vectors(&self) -> &[AlgebraElement] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Matrix of pairwise inner products.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|a| self.vectors.iter().map(|b| a.inner(b)).collect()).collect()
    }

    /// Largest deviation of the Gram matrix from `1` on the diagonal and
    /// `−1/n` off it, or `None` if the frame does not have `n + 1` vectors.
    pub fn standard_gram_deviation(&self) -> Option<f64> {
        let n = self.dim.get();
        if self.vectors.len() != n + 1 {
            return None;
        }
        let off = -1.0 / n as f64;
        let mut worst: f64 = 0.0;
        for (k, row) in self.gram().iter().enumerate() {
            for (l, g) in row.iter().enumerate() {
                let want = if k == l { 1.0 } else { off };
                worst = worst.max((g - want).abs());
            }
        }
        Some(worst)
    }

    /// Whether this is (up to rounding) a symmetric simplex frame.
    pub fn is_standard(&self) -> bool {
        self.standard_gram_deviation().is_some_and(|d| d <= STANDARD_FRAME_TOL)
    }

    pub fn vector_sum(&self) -> AlgebraElement {
        algebra::sum(self.dim, self.vectors.iter().copied())
    }

    /// `Σ c_k λ_k`.
    pub fn combination(&self, c: &[f64]) -> Result<AlgebraElement, SimplexError> {
        if c.len() != self.len() {
            return Err(SimplexError::Length { expected: self.len(), got: c.len() });
        }
        Ok(algebra::sum(self.dim, self.vectors.iter().zip(c).map(|(l, &ck)| *l * ck)))
    }

    /// Apply a real-linear map, given as a row-major `n × n` matrix acting on
    /// coefficient vectors, to every frame vector.
    pub fn transformed(&self, matrix: &[Vec<f64>]) -> Result<Self, SimplexError> {
        let n = self.dim.get();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(SimplexError::Length { expected: n, got: matrix.len() });
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let mut out = AlgebraElement::zero(self.dim);
                for (i, row) in matrix.iter().enumerate() {
                    out.coeffs_mut()[i] = row.iter().zip(v.coeffs()).map(|(a, b)| a * b).sum();
                }
                out
            })
            .collect();
        Ok(LambdaFrame { dim: self.dim, vectors })
    }

    fn require_standard(&self) -> Result<(), SimplexError> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(SimplexError::NonStandardFrame)
        }
    }
}

/// The symmetric simplex frame for `n`, built inductively from `(−1, 1)` by
/// `λ_k ↦ (√(1 − 1/k²)·μ_k, −1/k)` and appending `(0, …, 0, 1)`.
pub fn build_lambda(dim: AlgebraDim) -> LambdaFrame {
    let n = dim.get();
    let mut frame: Vec<Vec<f64>> = vec![vec![-1.0], vec![1.0]];
    for k in 2..=n {
        let kf = k as f64;
        let scale = (1.0 - 1.0 / (kf * kf)).sqrt();
        let mut next: Vec<Vec<f64>> = frame
            .into_iter()
            .map(|mu| {
                let mut v: Vec<f64> = mu.into_iter().map(|x| scale * x).collect();
                v.push(-1.0 / kf);
                v
            })
            .collect();
        let mut top = vec![0.0; k];
        top[k - 1] = 1.0;
        next.push(top);
        frame = next;
    }
    LambdaFrame::from_rows(dim, &frame).expect("inductive frame has matching dimensions")
}

/// `(n/(n+1)) Σ ⟨λ_k, x⟩ λ_k`, which reproduces `x` for the symmetric frame.
pub fn reconstruct(frame: &LambdaFrame, x: &AlgebraElement) -> Result<AlgebraElement, SimplexError> {
    frame.require_standard()?;
    if x.dim() != frame.dim() {
        return Err(AlgebraError::DimMismatch { left: frame.dim().get(), right: x.dim().get() }.into());
    }
    let n = frame.dim().get() as f64;
    let s = algebra::sum(frame.dim(), frame.vectors().iter().map(|l| *l * l.inner(x)));
    Ok(s * (n / (n + 1.0)))
}

/// Coordinates `(V, W)` of a tuple `u = Vλ + W·1` in `Span(λ, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanCoords {
    pub v: AlgebraElement,
    pub w: AlgebraElement,
}

/// `u_k = V λ_k + W`.
pub fn span_embed(frame: &LambdaFrame, c: &SpanCoords) -> Vec<AlgebraElement> {
    frame.vectors().iter().map(|l| c.v * *l + c.w).collect()
}

/// Inverse of [`span_embed`]: `V = (1/(n+1)) Σ u_k λ̄_k`, `W = (1/(n+1)) Σ u_k`.
///
/// Fails if re-embedding the result misses `u` by more than [`SPAN_TOL`]
/// relative to `1 + max |u_k|`.
pub fn span_coords(frame: &LambdaFrame, u: &[AlgebraElement]) -> Result<SpanCoords, SimplexError> {
    let c = span_coords_unchecked(frame, u)?;
    let back = span_embed(frame, &c);
    let scale = 1.0 + u.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let residual = back.iter().zip(u).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
    if residual > SPAN_TOL * scale {
        return Err(SimplexError::NotInSpan { residual });
    }
    Ok(c)
}

/// The averaging formulas of [`span_coords`] without the membership check.
pub fn span_coords_unchecked(frame: &LambdaFrame, u: &[AlgebraElement]) -> Result<SpanCoords, SimplexError> {
    frame.require_standard()?;
    if u.len() != frame.len() {
        return Err(SimplexError::Length { expected: frame.len(), got: u.len() });
    }
    let dim = frame.dim();
    if let Some(x) = u.iter().find(|x| x.dim() != dim) {
        return Err(AlgebraError::DimMismatch { left: dim.get(), right: x.dim().get() }.into());
    }
    let inv = 1.0 / frame.len() as f64;
    let v = algebra::sum(dim, u.iter().zip(frame.vectors()).map(|(uk, l)| *uk * l.conj())) * inv;
    let w = algebra::sum(dim, u.iter().copied()) * inv;
    Ok(SpanCoords { v, w })
}

/// Coefficient rows of a frame, for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRows {
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

impl From<&LambdaFrame> for FrameRows {
    fn from(f: &LambdaFrame) -> Self {
        FrameRows { n: f.dim().get(), rows: f.vectors().iter().map(|v| v.coeffs().to_vec()).collect() }
    }
}
