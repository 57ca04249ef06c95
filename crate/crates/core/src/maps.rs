//! Maps between `Y`, the polygon-type space `X`, and the orbit-space
//! model `S₊`, plus the division-algebra Hopf map.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{self, AlgebraElement};
use crate::simplex::{span_coords, span_embed, SimplexError, SpanCoords};
use crate::variety::{
    eval_defining, eval_sphere, eval_sphere_unchecked, eval_unchecked, PointX, PointY, VarietyError, VarietySpec,
};

/// Tolerance for "on the variety" preconditions of the maps.
pub const MAP_TOL: f64 = 1e-9;

/// `|b|` below which the sign choice in the inverse map is skipped.
pub const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("point is not in Y₊: Z_{index} = {value} is not real and non-negative")]
    NotInPositiveSlice { index: usize, value: Complex64 },
    #[error("|VW| = {0} is not below 1/2")]
    ProductTooLarge(f64),
    #[error("x² + y² = {p}, xy = {q} has no non-negative solution (needs p ≥ 2q ≥ 0)")]
    Infeasible { p: f64, q: f64 },
    #[error("point is not on X: sphere residual {0:.3e}")]
    NotOnX(f64),
    #[error("compactified point is off the sphere or has a negative coordinate: {0}")]
    InvalidCompactified(String),
}

fn require_on_y(spec: &VarietySpec, p: &PointY) -> Result<(), MapError> {
    let residual = eval_defining(spec, p)?.norm();
    if residual > MAP_TOL {
        return Err(VarietyError::NotOnVariety { residual, tol: MAP_TOL }.into());
    }
    Ok(())
}

/// `z = √(n+1)·Z`, `u_k = V̄ λ_k + W`, on the whole ambient space.
pub fn y_to_x_ambient(spec: &VarietySpec, p: &PointY) -> PointX {
    let scale = ((spec.n() + 1) as f64).sqrt();
    let z = p.z.iter().map(|z| z * scale).collect();
    let u = span_embed(spec.frame(), &SpanCoords { v: p.v[0].conj(), w: p.w[0] });
    PointX { z, u }
}

/// The equivariant diffeomorphism `Y → X`.
pub fn y_to_x(spec: &VarietySpec, p: &PointY) -> Result<PointX, MapError> {
    spec.require_standard().map_err(MapError::from)?;
    require_on_y(spec, p)?;
    Ok(y_to_x_ambient(spec, p))
}

/// Inverse of [`y_to_x`]: `Z = z/√(n+1)`, `V = conj((1/(n+1)) Σ u_k λ̄_k)`,
/// `W = (1/(n+1)) Σ u_k`.
pub fn x_to_y(spec: &VarietySpec, q: &PointX) -> Result<PointY, MapError> {
    let residuals = eval_sphere(spec, q)?;
    let worst = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    if worst > MAP_TOL {
        return Err(MapError::NotOnX(worst));
    }
    let c = span_coords(spec.frame(), &q.u)?;
    let scale = ((spec.n() + 1) as f64).sqrt();
    Ok(PointY::new(q.z.iter().map(|z| z / scale).collect(), c.v.conj(), c.w))
}

/// The `(n+1) × (n+1)` matrix with rows `(1, 2λ_kᵀ)` relating the two
/// systems of equations: `G(z, u) = M · (F₀, F)`.
pub fn relation_matrix(spec: &VarietySpec) -> DMatrix<f64> {
    let n = spec.n();
    let lambdas = spec.frame().vectors();
    DMatrix::from_fn(lambdas.len(), n + 1, |k, j| if j == 0 { 1.0 } else { 2.0 * lambdas[k].coeffs()[j - 1] })
}

/// `‖G(y_to_x(p)) − M·(F₀, F)(p)‖`, an identity on the whole ambient space.
pub fn gf_relation_residual(spec: &VarietySpec, p: &PointY) -> Result<f64, MapError> {
    spec.require_standard().map_err(MapError::from)?;
    let r = eval_defining(spec, p)?;
    let g = eval_sphere_unchecked(&y_to_x_ambient(spec, p));
    let mut fv = Vec::with_capacity(spec.n() + 1);
    fv.push(r.f0);
    fv.extend_from_slice(r.f.coeffs());
    let mf = relation_matrix(spec) * nalgebra::DVector::from_vec(fv);
    Ok(g.iter().zip(mf.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}

/// `φ(Z, V, W) = (Z, VW, |V|, |W|)` on `Y₊`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiImage {
    pub z: Vec<f64>,
    pub product: Vec<f64>,
    pub v: f64,
    pub w: f64,
}

impl PhiImage {
    pub fn product_norm(&self) -> f64 {
        self.product.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest coordinate difference to another image.
    pub fn max_abs_diff(&self, other: &PhiImage) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .chain(self.product.iter().zip(&other.product))
            .map(|(a, b)| (a - b).abs())
            .fold((self.v - other.v).abs().max((self.w - other.w).abs()), f64::max)
    }
}

/// A point `(a, b)` of `S₊ ⊂ S^{2n+2}`: `Σa_k² + b² = 1`, `a_k ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactifiedPoint {
    pub a: Vec<f64>,
    pub b: f64,
}

impl CompactifiedPoint {
    pub const TOL: f64 = 1e-12;

    pub fn new(a: Vec<f64>, b: f64) -> Result<Self, MapError> {
        let p = CompactifiedPoint { a, b };
        p.validate()?;
        Ok(p)
    }

    /// `Σa_k² + b² − 1`.
    pub fn sphere_residual(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>() + self.b * self.b - 1.0
    }

    fn validate(&self) -> Result<(), MapError> {
        if self.sphere_residual().abs() > Self::TOL {
            return Err(MapError::InvalidCompactified(format!("sphere residual {:.3e}", self.sphere_residual())));
        }
        if let Some(x) = self.a.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
            return Err(MapError::InvalidCompactified(format!("coordinate {x}")));
        }
        Ok(())
    }
}

pub fn phi(spec: &VarietySpec, p: &PointY) -> Result<PhiImage, MapError> {
    spec.require_standard().map_err(MapError::from)?;
    for (index, z) in p.z.iter().enumerate() {
        if z.im != 0.0 || z.re < 0.0 {
            return Err(MapError::NotInPositiveSlice { index, value: *z });
        }
    }
    require_on_y(spec, p)?;
    let (prod, v, w) = hopf(&p.v[0], &p.w[0]);
    Ok(PhiImage { z: p.z.iter().map(|z| z.re).collect(), product: prod.coeffs().to_vec(), v, w })
}

/// `ψ(Z, P, v, w) = (Z, v − w) / √(1 − 2|P|)`.
pub fn psi(img: &PhiImage) -> Result<CompactifiedPoint, MapError> {
    let pn = img.product_norm();
    if pn >= 0.5 {
        return Err(MapError::ProductTooLarge(pn));
    }
    let s = (1.0 - 2.0 * pn).sqrt();
    Ok(CompactifiedPoint { a: img.z.iter().map(|z| z / s).collect(), b: (img.v - img.w) / s })
}

/// Non-negative solution of `x² + y² = p`, `xy = q` with `x ≥ y`.
pub fn solve_pq(p: f64, q: f64) -> Result<(f64, f64), MapError> {
    const TOL: f64 = 1e-12;
    if q < -TOL || p < 2.0 * q - TOL {
        return Err(MapError::Infeasible { p, q });
    }
    let q = q.max(0.0);
    let plus = (p + 2.0 * q).max(0.0).sqrt();
    let minus = (p - 2.0 * q).max(0.0).sqrt();
    Ok(((plus + minus) / 2.0, (plus - minus) / 2.0))
}

/// The constructive inverse `S₊ → φ(Y₊) → Y₊`. Among the points of `Y₊`
/// with the given image it returns the one with `V` real and non-negative
/// (see [`gauge_fixed`]).
pub fn inverse_psi_phi(spec: &VarietySpec, c: &CompactifiedPoint) -> Result<PointY, MapError> {
    spec.require_standard().map_err(MapError::from)?;
    c.validate()?;
    if c.a.len() != spec.m() {
        return Err(VarietyError::Shape { what: "a coordinates", expected: spec.m(), got: c.a.len() }.into());
    }
    let dim = spec.dim();
    let half_n = spec.n() as f64 / 2.0;
    let weighted = |coords: &[f64]| {
        algebra::sum(dim, spec.frame().vectors().iter().zip(coords).map(|(l, x)| *l * (x * x))) * half_n
    };
    let cc = weighted(&c.a).norm();
    let p = (c.b * c.b + 2.0 * cc) / (1.0 + 2.0 * cc);
    let q = cc / (1.0 + 2.0 * cc);
    let (mut x, mut y) = solve_pq(p, q)?;
    if c.b < -SIGN_TOL {
        std::mem::swap(&mut x, &mut y);
    }
    let scale = (1.0 - 2.0 * x * y).sqrt();
    let z: Vec<f64> = c.a.iter().map(|a| scale * a).collect();
    let v = AlgebraElement::real(dim, x);
    let w = if x == 0.0 { AlgebraElement::real(dim, y) } else { weighted(&z) * (-1.0 / x) };
    Ok(PointY::with_real_z(&z, v, w))
}

/// The representative of `p`'s φ-fiber that [`inverse_psi_phi`] produces:
/// `(Z, |V|·1, VW/|V|)`, or `(Z, 0, |W|·1)` when `V = 0`.
pub fn gauge_fixed(p: &PointY) -> PointY {
    let (v, w) = (p.v[0], p.w[0]);
    let dim = v.dim();
    let vn = v.norm();
    let (nv, nw) = if vn == 0.0 {
        (AlgebraElement::zero(dim), AlgebraElement::real(dim, w.norm()))
    } else {
        (AlgebraElement::real(dim, vn), (v * w) * (1.0 / vn))
    };
    PointY { z: p.z.clone(), v: vec![nv], w: vec![nw] }
}

/// `π(V, W) = (VW, |V|, |W|)`; on the unit sphere of `𝔸²` this is the Hopf
/// fibration `S^{2n−1} → S^n`.
pub fn hopf(v: &AlgebraElement, w: &AlgebraElement) -> (AlgebraElement, f64, f64) {
    (*v * *w, v.norm(), w.norm())
}

/// Residual of `(F₀, F)` at a point; re-exported for map-level checks.
pub fn defining_residual(spec: &VarietySpec, p: &PointY) -> f64 {
    eval_unchecked(spec, p).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraDim;
    use crate::variety::Field;

    fn n1_point() -> PointY {
        let d = AlgebraDim::REAL;
        let a = (3.0f64 / 8.0).sqrt();
        PointY::with_real_z(&[a, a], AlgebraElement::real(d, 0.5), AlgebraElement::zero(d))
    }

    fn n1_spec() -> VarietySpec {
        VarietySpec::standard(AlgebraDim::REAL, Field::Complex)
    }

    #[test]
    fn fixed_point_maps_to_ones() {
        for d in AlgebraDim::ALL {
            let spec = VarietySpec::standard(d, Field::Complex);
            let p = PointY::with_real_z(&vec![0.0; d.get() + 1], AlgebraElement::zero(d), AlgebraElement::one(d));
            let q = y_to_x(&spec, &p).unwrap();
            assert!(q.z.iter().all(|z| z.norm() == 0.0));
            assert!(q.u.iter().all(|u| *u == AlgebraElement::one(d)));
            let back = x_to_y(&spec, &q).unwrap();
            assert!(back.max_abs_diff(&p) < 1e-15);
        }
    }

    #[test]
    fn n1_point_maps_onto_x() {
        let spec = n1_spec();
        let q = y_to_x(&spec, &n1_point()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((q.z[0].re - h).abs() < 1e-15 && (q.z[1].re - h).abs() < 1e-15);
        assert_eq!(q.u[0].coeffs(), &[-0.5]);
        assert_eq!(q.u[1].coeffs(), &[0.5]);
        for r in eval_sphere(&spec, &q).unwrap() {
            assert!(r.abs() < 1e-15);
        }
    }

    #[test]
    fn y_to_x_rejects_points_off_y() {
        let spec = n1_spec();
        let mut p = n1_point();
        p.w[0] = AlgebraElement::real(AlgebraDim::REAL, 0.3);
        assert!(matches!(y_to_x(&spec, &p), Err(MapError::Variety(VarietyError::NotOnVariety { .. }))));
    }

    #[test]
    fn x_to_y_rejects_tuples_off_span() {
        let d = AlgebraDim::COMPLEX;
        let spec = VarietySpec::standard(d, Field::Complex);
        let one = AlgebraElement::one(d);
        let z = AlgebraElement::zero(d);
        let q = PointX { z: vec![Complex64::new(0.0, 0.0); 3], u: vec![one, one, AlgebraElement::basis(d, 1)] };
        assert!(matches!(x_to_y(&spec, &q), Err(MapError::Simplex(SimplexError::NotInSpan { .. }))));
        let q = PointX { z: vec![Complex64::new(0.0, 0.0); 3], u: vec![z, z, z] };
        assert!(matches!(x_to_y(&spec, &q), Err(MapError::NotOnX(_))));
    }

    #[test]
    fn relation_matrix_is_invertible() {
        for d in AlgebraDim::ALL {
            let spec = VarietySpec::standard(d, Field::Complex);
            let sv = crate::variety::singular_values(&relation_matrix(&spec));
            assert!(*sv.last().unwrap() > 0.1, "{d}: {sv:?}");
        }
    }

    #[test]
    fn phi_psi_examples() {
        let d = AlgebraDim::REAL;
        let spec = n1_spec();
        let fixed = PointY::with_real_z(&[0.0, 0.0], AlgebraElement::zero(d), AlgebraElement::one(d));
        let img = phi(&spec, &fixed).unwrap();
        assert_eq!(img, PhiImage { z: vec![0.0, 0.0], product: vec![0.0], v: 0.0, w: 1.0 });
        assert_eq!(psi(&img).unwrap(), CompactifiedPoint { a: vec![0.0, 0.0], b: -1.0 });

        let img = phi(&spec, &n1_point()).unwrap();
        assert_eq!(img.product, vec![0.0]);
        assert_eq!((img.v, img.w), (0.5, 0.0));
        let s = psi(&img).unwrap();
        assert_eq!(s.b, 0.5);
        assert!(s.sphere_residual().abs() < 1e-15);
    }

    #[test]
    fn phi_rejects_negative_z() {
        let spec = n1_spec();
        let mut p = n1_point();
        p.z[1] = -p.z[1];
        assert!(matches!(phi(&spec, &p), Err(MapError::NotInPositiveSlice { index: 1, .. })));
    }

    #[test]
    fn psi_balanced_and_too_large() {
        let img = PhiImage { z: vec![0.5], product: vec![0.1], v: 0.3, w: 0.3 };
        assert_eq!(psi(&img).unwrap().b, 0.0);
        let img = PhiImage { z: vec![0.0], product: vec![0.5], v: 0.7, w: 0.7 };
        assert!(matches!(psi(&img), Err(MapError::ProductTooLarge(_))));
    }

    #[test]
    fn solve_pq_examples() {
        assert_eq!(solve_pq(2.0, 1.0).unwrap(), (1.0, 1.0));
        assert_eq!(solve_pq(1.0, 0.0).unwrap(), (1.0, 0.0));
        let (x, y) = solve_pq(1.25, 0.5).unwrap();
        assert!((x - 1.0).abs() < 1e-15 && (y - 0.5).abs() < 1e-15);
        assert!(matches!(solve_pq(1.0, 0.6), Err(MapError::Infeasible { .. })));
    }

    #[test]
    fn inverse_examples() {
        let d = AlgebraDim::REAL;
        let spec = n1_spec();
        let top = CompactifiedPoint::new(vec![0.0, 0.0], 1.0).unwrap();
        let p = inverse_psi_phi(&spec, &top).unwrap();
        assert_eq!(p, PointY::with_real_z(&[0.0, 0.0], AlgebraElement::one(d), AlgebraElement::zero(d)));

        let a = (3.0f64 / 8.0).sqrt();
        let c = CompactifiedPoint::new(vec![a, a], 0.5).unwrap();
        let p = inverse_psi_phi(&spec, &c).unwrap();
        assert!(p.max_abs_diff(&n1_point()) < 1e-15);
    }

    #[test]
    fn equator_gives_equal_norms() {
        let spec = VarietySpec::standard(AlgebraDim::QUATERNION, Field::Complex);
        let a = vec![0.1, 0.2, 0.3, 0.4, 0.0];
        let rest: f64 = 1.0 - a.iter().map(|x| x * x).sum::<f64>();
        let mut a = a;
        a[4] = rest.sqrt();
        let c = CompactifiedPoint::new(a, 0.0).unwrap();
        let p = inverse_psi_phi(&spec, &c).unwrap();
        assert!((p.v[0].norm() - p.w[0].norm()).abs() < 1e-12);
    }

    #[test]
    fn hopf_examples() {
        let d = AlgebraDim::QUATERNION;
        let (p, v, w) = hopf(&AlgebraElement::one(d), &AlgebraElement::zero(d));
        assert_eq!((p, v, w), (AlgebraElement::zero(d), 1.0, 0.0));
        let r = AlgebraDim::REAL;
        let (x, y) = (AlgebraElement::real(r, 0.6), AlgebraElement::real(r, -0.8));
        assert_eq!(hopf(&x, &y), hopf(&-x, &-y));
    }
}
