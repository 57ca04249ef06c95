//! The quadric varieties `Y`, `Y(λ)` and `Y(λ, s)`, the sphere product `X`,
//! and the torus action on the `Z` coordinates.
//!
//! A point of `Y(λ, s)` is `(Z, V_1…V_s, W_1…W_s)` with `Z ∈ ℂ^m` (or `ℝ^m`
//! in the real case) and `V_l, W_l` in the algebra. The defining map is
//!
//! ```text
//! F  = c · Σ_k |Z_k|² λ_k + Σ_l V_l W_l          (algebra-valued)
//! F₀ = Σ_k |Z_k|² + Σ_l (|V_l|² + |W_l|²) − 1    (real)
//! ```
//!
//! where the frame weight `c` is `n/2` for the standard variety and `1` for
//! the generalized ones.

mod hull;
mod sampling;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraDim, AlgebraElement, AlgebraError};
use crate::simplex::{build_lambda, LambdaFrame, SimplexError};

pub use hull::{hull_membership, origin_in_hull, weakly_hyperbolic, HullCertificate, HullDecision, HULL_TOL};
pub use sampling::{project_to_cone, sample, sample_boundary, sample_positive, ProjectionOutcome, SAMPLE_RESIDUAL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VarietyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("{what}: expected {expected}, got {got}")]
    Shape { what: &'static str, expected: usize, got: usize },
    #[error("point is not on the variety (residual {residual:.3e} > {tol:.1e})")]
    NotOnVariety { residual: f64, tol: f64 },
    #[error("frame is not weakly hyperbolic: the origin lies in the convex hull of at most n frame vectors")]
    NotWeaklyHyperbolic,
    #[error("Gauss-Newton projection failed to converge after {attempts} draws")]
    NonConvergence { attempts: usize },
    #[error("torus element entry {index} has modulus {modulus}, expected 1")]
    NonUnitTorus { index: usize, modulus: f64 },
    #[error("complex phases cannot act on a real-case variety")]
    PhaseOnRealSpec,
    #[error("operation requires the standard variety (m = n + 1, s = 1, symmetric frame, weight n/2)")]
    NonStandardSpec,
    #[error("point has complex Z coordinates but the variety is real")]
    ComplexPointOnRealSpec,
    #[error("invalid variety: {0}")]
    Invalid(String),
}

/// Scalar field of the `Z` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real coordinates per `Z_k`.
    pub fn width(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field '{other}', expected 'real' or 'complex'")),
        }
    }
}

/// Full description of one variety.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietySpec {
    dim: AlgebraDim,
    frame: LambdaFrame,
    weight: f64,
    s: usize,
    field: Field,
}

impl VarietySpec {
    /// `Y` itself: the symmetric frame with weight `n/2` and one `(V, W)` pair.
    pub fn standard(dim: AlgebraDim, field: Field) -> Self {
        let weight = dim.get() as f64 / 2.0;
        VarietySpec { dim, frame: build_lambda(dim), weight, s: 1, field }
    }

    /// `Y` built on a caller-supplied symmetric frame (e.g. a rotated one).
    pub fn standard_with_frame(frame: LambdaFrame, field: Field) -> Result<Self, VarietyError> {
        if !frame.is_standard() {
            return Err(SimplexError::NonStandardFrame.into());
        }
        let dim = frame.dim();
        Ok(VarietySpec { dim, frame, weight: dim.get() as f64 / 2.0, s: 1, field })
    }

    /// `Y(λ, s)` with unit frame weight.
    pub fn general(frame: LambdaFrame, s: usize, field: Field) -> Result<Self, VarietyError> {
        Self::with_weight(frame, 1.0, s, field)
    }

    pub fn with_weight(frame: LambdaFrame, weight: f64, s: usize, field: Field) -> Result<Self, VarietyError> {
        if s == 0 {
            return Err(VarietyError::Invalid("at least one (V, W) pair is required".into()));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(VarietyError::Invalid(format!("frame weight must be positive, got {weight}")));
        }
        Ok(VarietySpec { dim: frame.dim(), frame, weight, s, field })
    }

    pub fn dim(&self) -> AlgebraDim {
        self.dim
    }
    pub fn n(&self) -> usize {
        self.dim.get()
    }
    pub fn m(&self) -> usize {
        self.frame.len()
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn frame(&self) -> &LambdaFrame {
        &self.frame
    }
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Whether this is `Y` with the symmetric frame and weight `n/2`.
    pub fn is_standard(&self) -> bool {
        self.s == 1
            && self.frame.len() == self.n() + 1
            && self.frame.is_standard()
            && (self.weight - self.n() as f64 / 2.0).abs() <= 1e-15
    }

    pub(crate) fn require_standard(&self) -> Result<(), VarietyError> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(VarietyError::NonStandardSpec)
        }
    }

    /// Real dimension of the ambient space `ℂ^m × 𝔸^{2s}` (or `ℝ^m × 𝔸^{2s}`).
    pub fn ambient_dim(&self) -> usize {
        self.m() * self.field.width() + 2 * self.s * self.n()
    }

    /// Manifold dimension `ambient − (1 + n)` when the frame is weakly hyperbolic.
    pub fn manifold_dim(&self) -> isize {
        self.ambient_dim() as isize - (1 + self.n()) as isize
    }

    /// The same variety with all `Z` coordinates removed (its torus-fixed set).
    pub fn fixed_set_spec(&self) -> VarietySpec {
        VarietySpec {
            dim: self.dim,
            frame: LambdaFrame::new(self.dim, Vec::new()).expect("empty frame"),
            weight: self.weight,
            s: self.s,
            field: self.field,
        }
    }

    fn check_point(&self, p: &PointY) -> Result<(), VarietyError> {
        if p.z.len() != self.m() {
            return Err(VarietyError::Shape { what: "Z coordinates", expected: self.m(), got: p.z.len() });
        }
        if p.v.len() != self.s || p.w.len() != self.s {
            return Err(VarietyError::Shape { what: "(V, W) pairs", expected: self.s, got: p.v.len().min(p.w.len()) });
        }
        for x in p.v.iter().chain(&p.w) {
            if x.dim() != self.dim {
                return Err(AlgebraError::DimMismatch { left: self.n(), right: x.dim().get() }.into());
            }
        }
        if self.field == Field::Real && p.z.iter().any(|z| z.im != 0.0) {
            return Err(VarietyError::ComplexPointOnRealSpec);
        }
        Ok(())
    }
}

/// An ambient point `(Z, V, W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointY {
    pub z: Vec<Complex64>,
    pub v: Vec<AlgebraElement>,
    pub w: Vec<AlgebraElement>,
}

impl PointY {
    /// Point with a single `(V, W)` pair.
    pub fn new(z: Vec<Complex64>, v: AlgebraElement, w: AlgebraElement) -> Self {
        PointY { z, v: vec![v], w: vec![w] }
    }

    /// Point with real `Z` coordinates and a single `(V, W)` pair.
    pub fn with_real_z(z: &[f64], v: AlgebraElement, w: AlgebraElement) -> Self {
        Self::new(z.iter().map(|&x| Complex64::new(x, 0.0)).collect(), v, w)
    }

    /// Squared Euclidean norm in the ambient space.
    pub fn norm_sqr(&self) -> f64 {
        self.z.iter().map(|z| z.norm_sqr()).sum::<f64>()
            + self.v.iter().chain(&self.w).map(|x| x.norm_sqr()).sum::<f64>()
    }

    /// Representative in the slice `Y₊`: every `Z_k` replaced by `|Z_k|`.
    pub fn folded(&self) -> PointY {
        PointY {
            z: self.z.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
            v: self.v.clone(),
            w: self.w.clone(),
        }
    }

    /// Flatten to real coordinates: `Z` (re, im per entry, or re only), then
    /// every `V_l`, then every `W_l`.
    pub fn to_real_coords(&self, field: Field) -> Vec<f64> {
        let mut out = Vec::new();
        for z in &self.z {
            out.push(z.re);
            if field == Field::Complex {
                out.push(z.im);
            }
        }
        for x in self.v.iter().chain(&self.w) {
            out.extend_from_slice(x.coeffs());
        }
        out
    }

    /// Inverse of [`to_real_coords`](Self::to_real_coords).
    pub fn from_real_coords(spec: &VarietySpec, x: &[f64]) -> Result<PointY, VarietyError> {
        if x.len() != spec.ambient_dim() {
            return Err(VarietyError::Shape { what: "real coordinates", expected: spec.ambient_dim(), got: x.len() });
        }
        let width = spec.field().width();
        let (zs, rest) = x.split_at(spec.m() * width);
        let z = zs.chunks(width).map(|c| Complex64::new(c[0], if width == 2 { c[1] } else { 0.0 })).collect();
        let elems: Vec<AlgebraElement> =
            rest.chunks(spec.n()).map(|c| AlgebraElement::from_slice(spec.dim(), c)).collect::<Result<_, _>>()?;
        let (v, w) = elems.split_at(spec.s());
        Ok(PointY { z, v: v.to_vec(), w: w.to_vec() })
    }

    /// Largest coordinate-wise distance to another point of the same shape.
    pub fn max_abs_diff(&self, other: &PointY) -> f64 {
        let zd = self.z.iter().zip(&other.z).map(|(a, b)| (a - b).norm());
        let ad = self
            .v
            .iter()
            .zip(&other.v)
            .chain(self.w.iter().zip(&other.w))
            .flat_map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>());
        zd.chain(ad).fold(0.0, f64::max)
    }
}

/// An ambient point `(z, u)` of `ℂ^{n+1} × 𝔸^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointX {
    pub z: Vec<Complex64>,
    pub u: Vec<AlgebraElement>,
}

/// Element of the torus `(S¹)^m`, or of `{±1}^m` when every entry is real.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement(Vec<Complex64>);

impl TorusElement {
    pub const UNIT_TOL: f64 = 1e-12;

    pub fn new(entries: Vec<Complex64>) -> Result<Self, VarietyError> {
        for (index, g) in entries.iter().enumerate() {
            let modulus = g.norm();
            if (modulus - 1.0).abs() > Self::UNIT_TOL {
                return Err(VarietyError::NonUnitTorus { index, modulus });
            }
        }
        Ok(TorusElement(entries))
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        TorusElement(angles.iter().map(|&t| Complex64::from_polar(1.0, t)).collect())
    }

    pub fn signs(signs: &[bool]) -> Self {
        TorusElement(signs.iter().map(|&neg| Complex64::new(if neg { -1.0 } else { 1.0 }, 0.0)).collect())
    }

    pub fn identity(m: usize) -> Self {
        TorusElement(vec![Complex64::new(1.0, 0.0); m])
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    /// Whether every entry is `±1`.
    pub fn is_sign_vector(&self) -> bool {
        self.0.iter().all(|g| g.im == 0.0)
    }
}

/// Value of the defining map `(F₀, F)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefiningResidual {
    pub f0: f64,
    pub f: AlgebraElement,
}

impl DefiningResidual {
    /// `√(F₀² + |F|²)`.
    pub fn norm(&self) -> f64 {
        (self.f0 * self.f0 + self.f.norm_sqr()).sqrt()
    }
}

pub fn eval_defining(spec: &VarietySpec, p: &PointY) -> Result<DefiningResidual, VarietyError> {
    spec.check_point(p)?;
    Ok(eval_unchecked(spec, p))
}

pub(crate) fn eval_unchecked(spec: &VarietySpec, p: &PointY) -> DefiningResidual {
    let dim = spec.dim();
    let mut f = AlgebraElement::zero(dim);
    let mut z2 = 0.0;
    for (z, l) in p.z.iter().zip(spec.frame().vectors()) {
        let r = z.norm_sqr();
        z2 += r;
        f += *l * (spec.weight() * r);
    }
    let mut vw2 = 0.0;
    for (v, w) in p.v.iter().zip(&p.w) {
        f += *v * *w;
        vw2 += v.norm_sqr() + w.norm_sqr();
    }
    DefiningResidual { f0: z2 + vw2 - 1.0, f }
}

/// `G_k = |z_k|² + |u_k|² − 1`.
pub fn eval_sphere(spec: &VarietySpec, q: &PointX) -> Result<Vec<f64>, VarietyError> {
    spec.require_standard()?;
    let k = spec.n() + 1;
    if q.z.len() != k || q.u.len() != k {
        return Err(VarietyError::Shape { what: "X coordinates", expected: k, got: q.z.len().min(q.u.len()) });
    }
    if let Some(u) = q.u.iter().find(|u| u.dim() != spec.dim()) {
        return Err(AlgebraError::DimMismatch { left: spec.n(), right: u.dim().get() }.into());
    }
    Ok(eval_sphere_unchecked(q))
}

pub(crate) fn eval_sphere_unchecked(q: &PointX) -> Vec<f64> {
    q.z.iter().zip(&q.u).map(|(z, u)| z.norm_sqr() + u.norm_sqr() - 1.0).collect()
}

/// Derivative of `(F₀, F)` with respect to the real coordinates of
/// [`PointY::to_real_coords`]. Row 0 is `F₀`, rows `1..=n` are the
/// coefficients of `F`.
pub fn jacobian(spec: &VarietySpec, p: &PointY) -> Result<DMatrix<f64>, VarietyError> {
    spec.check_point(p)?;
    Ok(jacobian_unchecked(spec, p))
}

pub(crate) fn jacobian_unchecked(spec: &VarietySpec, p: &PointY) -> DMatrix<f64> {
    let n = spec.n();
    let dim = spec.dim();
    let width = spec.field().width();
    let mut j = DMatrix::zeros(1 + n, spec.ambient_dim());
    let mut col = 0;
    for (z, l) in p.z.iter().zip(spec.frame().vectors()) {
        let parts = [z.re, z.im];
        for &x in &parts[..width] {
            j[(0, col)] = 2.0 * x;
            for (i, li) in l.coeffs().iter().enumerate() {
                j[(1 + i, col)] = 2.0 * spec.weight() * x * li;
            }
            col += 1;
        }
    }
    let v_start = col;
    let w_start = col + spec.s() * n;
    for (l, (v, w)) in p.v.iter().zip(&p.w).enumerate() {
        for a in 0..n {
            let e = AlgebraElement::basis(dim, a);
            // ∂/∂V: B ↦ B W_l ; ∂/∂W: C ↦ V_l C
            let dv = e * *w;
            let dw = *v * e;
            let cv = v_start + l * n + a;
            let cw = w_start + l * n + a;
            j[(0, cv)] = 2.0 * v.coeffs()[a];
            j[(0, cw)] = 2.0 * w.coeffs()[a];
            for i in 0..n {
                j[(1 + i, cv)] = dv.coeffs()[i];
                j[(1 + i, cw)] = dw.coeffs()[i];
            }
        }
    }
    j
}

/// Singular values of a matrix, in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Outcome of a regularity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub smallest_singular_value: f64,
    pub rank: usize,
    pub rows: usize,
}

/// Whether `p` is a regular point of `(F₀, F)`: the Jacobian must have full
/// row rank `1 + n` with every singular value above `tol`.
pub fn is_regular(spec: &VarietySpec, p: &PointY, tol: f64) -> Result<RegularityReport, VarietyError> {
    let residual = eval_defining(spec, p)?.norm();
    if residual > tol {
        return Err(VarietyError::NotOnVariety { residual, tol });
    }
    let j = jacobian_unchecked(spec, p);
    let rows = j.nrows();
    let sv = singular_values(&j);
    let rank = sv.iter().filter(|&&x| x > tol).count();
    let smallest = if sv.len() < rows { 0.0 } else { sv[rows - 1] };
    Ok(RegularityReport { regular: rank == rows && smallest > tol, smallest_singular_value: smallest, rank, rows })
}

/// `Z_k ↦ g_k Z_k`; `V`, `W` unchanged.
pub fn act(spec: &VarietySpec, g: &TorusElement, p: &PointY) -> Result<PointY, VarietyError> {
    spec.check_point(p)?;
    if g.entries().len() != spec.m() {
        return Err(VarietyError::Shape { what: "torus entries", expected: spec.m(), got: g.entries().len() });
    }
    if spec.field() == Field::Real && !g.is_sign_vector() {
        return Err(VarietyError::PhaseOnRealSpec);
    }
    Ok(act_unchecked(g, p))
}

pub(crate) fn act_unchecked(g: &TorusElement, p: &PointY) -> PointY {
    PointY { z: p.z.iter().zip(g.entries()).map(|(z, g)| g * z).collect(), v: p.v.clone(), w: p.w.clone() }
}

/// Clamp threshold for slightly negative barycentric weights.
pub const LIFT_CLAMP: f64 = 1e-12;

/// The `Y₊` point over `(V, W)`: `|Z_k|²` are the barycentric weights
///
/// ```text
/// t_k = (1 − |V|² − |W|²)/(n+1) − (2/(n+1)) ⟨λ_k, VW⟩
/// ```
///
/// and the lift exists iff all `t_k ≥ 0`.
pub fn lift_from_vw(
    spec: &VarietySpec,
    v: &AlgebraElement,
    w: &AlgebraElement,
) -> Result<Option<PointY>, VarietyError> {
    spec.require_standard()?;
    let t = barycentric_weights(spec, v, w)?;
    if t.iter().any(|&tk| tk < -LIFT_CLAMP) {
        return Ok(None);
    }
    let z: Vec<f64> = t.iter().map(|&tk| tk.max(0.0).sqrt()).collect();
    Ok(Some(PointY::with_real_z(&z, *v, *w)))
}

/// The weights `t_k` of [`lift_from_vw`] without the sign test.
pub fn barycentric_weights(
    spec: &VarietySpec,
    v: &AlgebraElement,
    w: &AlgebraElement,
) -> Result<Vec<f64>, VarietyError> {
    spec.require_standard()?;
    let vw = v.checked_mul(w)?;
    let k = (spec.n() + 1) as f64;
    let base = (1.0 - v.norm_sqr() - w.norm_sqr()) / k;
    Ok(spec.frame().vectors().iter().map(|l| base - 2.0 / k * l.inner(&vw)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn n1_point() -> PointY {
        let d = AlgebraDim::REAL;
        let a = (3.0f64 / 8.0).sqrt();
        PointY::new(vec![c(a), c(a)], AlgebraElement::real(d, 0.5), AlgebraElement::zero(d))
    }

    #[test]
    fn origin_residual() {
        for d in AlgebraDim::ALL {
            let spec = VarietySpec::standard(d, Field::Complex);
            let p = PointY::new(vec![c(0.0); d.get() + 1], AlgebraElement::zero(d), AlgebraElement::zero(d));
            let r = eval_defining(&spec, &p).unwrap();
            assert_eq!(r.f0, -1.0);
            assert_eq!(r.f.norm(), 0.0);
        }
    }

    #[test]
    fn n1_point_is_on_y() {
        let spec = VarietySpec::standard(AlgebraDim::REAL, Field::Complex);
        let r = eval_defining(&spec, &n1_point()).unwrap();
        assert!(r.norm() < 1e-15, "{r:?}");
    }

    #[test]
    fn fixed_points_are_on_y_and_regular() {
        for d in AlgebraDim::ALL {
            let spec = VarietySpec::standard(d, Field::Complex);
            let p = PointY::new(vec![c(0.0); d.get() + 1], AlgebraElement::zero(d), AlgebraElement::one(d));
            assert_eq!(eval_defining(&spec, &p).unwrap().norm(), 0.0);
            let rep = is_regular(&spec, &p, 1e-9).unwrap();
            assert!(rep.regular, "{d}: {rep:?}");
        }
    }

    #[test]
    fn jacobian_vanishes_at_origin() {
        let spec = VarietySpec::standard(AlgebraDim::QUATERNION, Field::Complex);
        let p = PointY::new(vec![c(0.0); 5], AlgebraElement::zero(spec.dim()), AlgebraElement::zero(spec.dim()));
        let j = jacobian(&spec, &p).unwrap();
        assert_eq!(j.nrows(), 5);
        assert_eq!(j.ncols(), spec.ambient_dim());
        assert!(j.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn w_block_is_left_multiplication_by_v() {
        let d = AlgebraDim::OCTONION;
        let spec = VarietySpec::standard(d, Field::Complex);
        let v = AlgebraElement::from_slice(d, &[0.3, -0.1, 0.2, 0.5, -0.4, 0.1, 0.0, 0.7]).unwrap();
        let p = PointY::new(vec![c(0.1); 9], v, AlgebraElement::zero(d));
        let j = jacobian(&spec, &p).unwrap();
        let w_start = 2 * 9 + 8;
        for a in 0..8 {
            let col = v * AlgebraElement::basis(d, a);
            for i in 0..8 {
                assert_eq!(j[(1 + i, w_start + a)], col.coeffs()[i]);
            }
        }
        let block = j.view((1, w_start), (8, 8)).clone_owned();
        let sv = singular_values(&block);
        // left multiplication by V is |V| times an orthogonal map
        for s in sv {
            assert!((s - v.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn non_hyperbolic_frame_gives_singular_point() {
        let d = AlgebraDim::COMPLEX;
        let frame = LambdaFrame::from_rows(d, &[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let spec = VarietySpec::general(frame, 1, Field::Complex).unwrap();
        let h = 0.5f64.sqrt();
        let p = PointY::new(vec![c(h), c(h)], AlgebraElement::zero(d), AlgebraElement::zero(d));
        assert!(eval_defining(&spec, &p).unwrap().norm() < 1e-15);
        let rep = is_regular(&spec, &p, 1e-9).unwrap();
        assert!(!rep.regular);
        assert_eq!(rep.rank, 2);
        assert!(rep.smallest_singular_value < 1e-12);
    }

    #[test]
    fn is_regular_requires_point_on_variety() {
        let spec = VarietySpec::standard(AlgebraDim::COMPLEX, Field::Complex);
        let d = spec.dim();
        let p = PointY::new(vec![c(0.0); 3], AlgebraElement::zero(d), AlgebraElement::zero(d));
        assert!(matches!(is_regular(&spec, &p, 1e-9), Err(VarietyError::NotOnVariety { .. })));
    }

    #[test]
    fn sphere_residuals() {
        let d = AlgebraDim::COMPLEX;
        let spec = VarietySpec::standard(d, Field::Complex);
        let q = PointX { z: vec![c(0.0); 3], u: vec![AlgebraElement::one(d); 3] };
        assert_eq!(eval_sphere(&spec, &q).unwrap(), vec![0.0; 3]);
        let q = PointX { z: vec![c(0.0); 3], u: vec![AlgebraElement::zero(d); 3] };
        assert_eq!(eval_sphere(&spec, &q).unwrap(), vec![-1.0; 3]);
        let q = PointX { z: vec![c(0.0); 2], u: vec![AlgebraElement::zero(d); 3] };
        assert!(eval_sphere(&spec, &q).is_err());
    }

    #[test]
    fn torus_action() {
        let spec = VarietySpec::standard(AlgebraDim::REAL, Field::Complex);
        let p = n1_point();
        assert_eq!(act(&spec, &TorusElement::identity(2), &p).unwrap(), p);
        let g = TorusElement::signs(&[true, false]);
        let q = act(&spec, &g, &p).unwrap();
        assert_eq!(q.z[0].norm(), p.z[0].norm());
        assert_eq!(q.z[0], -p.z[0]);
        assert!(TorusElement::new(vec![c(2.0)]).is_err());

        let real = VarietySpec::standard(AlgebraDim::REAL, Field::Real);
        let g = TorusElement::from_angles(&[0.3, 0.0]);
        assert_eq!(act(&real, &g, &p), Err(VarietyError::PhaseOnRealSpec));
        assert!(act(&real, &TorusElement::signs(&[true, true]), &p).is_ok());
    }

    #[test]
    fn lift_examples() {
        for d in AlgebraDim::ALL {
            let spec = VarietySpec::standard(d, Field::Complex);
            let zero = AlgebraElement::zero(d);
            let p = lift_from_vw(&spec, &zero, &zero).unwrap().unwrap();
            let want = 1.0 / ((d.get() + 1) as f64).sqrt();
            assert!(p.z.iter().all(|z| (z.re - want).abs() < 1e-15 && z.im == 0.0));

            let p = lift_from_vw(&spec, &zero, &AlgebraElement::one(d)).unwrap().unwrap();
            assert!(p.z.iter().all(|z| z.norm() == 0.0));
        }
        let d = AlgebraDim::REAL;
        let spec = VarietySpec::standard(d, Field::Complex);
        let h = AlgebraElement::real(d, 0.5f64.sqrt());
        assert_eq!(lift_from_vw(&spec, &h, &h).unwrap(), None);
    }

    #[test]
    fn lift_requires_standard_spec() {
        let d = AlgebraDim::QUATERNION;
        let spec = VarietySpec::general(build_lambda(d), 1, Field::Complex).unwrap();
        let zero = AlgebraElement::zero(d);
        assert_eq!(lift_from_vw(&spec, &zero, &zero), Err(VarietyError::NonStandardSpec));
    }

    #[test]
    fn real_coords_roundtrip() {
        let d = AlgebraDim::QUATERNION;
        let frame = build_lambda(d);
        let spec = VarietySpec::general(frame, 2, Field::Complex).unwrap();
        let x: Vec<f64> = (0..spec.ambient_dim()).map(|i| i as f64 * 0.25 - 3.0).collect();
        let p = PointY::from_real_coords(&spec, &x).unwrap();
        assert_eq!(p.v.len(), 2);
        assert_eq!(p.to_real_coords(spec.field()), x);
    }

    #[test]
    fn shape_errors() {
        let spec = VarietySpec::standard(AlgebraDim::COMPLEX, Field::Complex);
        let d = spec.dim();
        let p = PointY::new(vec![c(0.0); 2], AlgebraElement::zero(d), AlgebraElement::zero(d));
        assert!(matches!(eval_defining(&spec, &p), Err(VarietyError::Shape { .. })));
        let p = PointY::new(
            vec![c(0.0); 3],
            AlgebraElement::zero(AlgebraDim::REAL),
            AlgebraElement::zero(AlgebraDim::REAL),
        );
        assert!(matches!(eval_defining(&spec, &p), Err(VarietyError::Algebra(_))));
        assert!(VarietySpec::general(build_lambda(d), 0, Field::Real).is_err());
    }
}
