//! Predicted diffeomorphism types, Poincaré polynomials and fixed sets of
//! the varieties, and the Betti-sum freeness test for equivariant
//! cohomology.
//!
//! Nothing here computes homology from a triangulation; the predictions
//! are closed-form and the only numerical work is in
//! [`verify_fixed_points`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::variety::{self, origin_in_hull, weakly_hyperbolic, Field, TorusElement, VarietyError, VarietySpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("summands have different dimensions ({0} and {1})")]
    InconsistentDimensions(u32, u32),
    #[error("invalid summand S^{0}×S^{1}: both spheres need dimension ≥ 1")]
    InvalidSummand(u32, u32),
    #[error("a connected sum needs at least one summand")]
    EmptySum,
    #[error("frame is not weakly hyperbolic")]
    NotWeaklyHyperbolic,
    #[error("operation requires the standard variety")]
    NonStandardSpec,
    #[error("fixed circle count {count} must be between 1 and {max}")]
    FixedCircleCount { count: usize, max: usize },
    #[error("no closed-form prediction available: {0}")]
    NoPrediction(String),
    #[error("fixed-point check needs exactly one (V, W) pair, got {0}")]
    PairCount(usize),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// `multiplicity` copies of `S^a × S^b` inside a connected sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SphereProductSummand {
    pub a: u32,
    pub b: u32,
    pub multiplicity: u64,
}

impl SphereProductSummand {
    pub fn new(a: u32, b: u32, multiplicity: u64) -> Self {
        SphereProductSummand { a, b, multiplicity }
    }
    pub fn dimension(&self) -> u32 {
        self.a + self.b
    }
}

impl fmt::Display for SphereProductSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} S^{}xS^{}", self.multiplicity, self.a, self.b)
    }
}

/// Betti numbers `b_0, …, b_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincarePolynomial {
    pub betti: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn top_degree(&self) -> usize {
        self.betti.len().saturating_sub(1)
    }

    pub fn betti_sum(&self) -> u64 {
        self.betti.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// `b_k = b_{d−k}` for all `k`.
    pub fn satisfies_duality(&self) -> bool {
        self.betti.iter().eq(self.betti.iter().rev())
    }

    /// Product of Poincaré polynomials (Künneth over a field).
    pub fn times(&self, other: &PoincarePolynomial) -> PoincarePolynomial {
        let mut out = vec![0; self.betti.len() + other.betti.len() - 1];
        for (i, a) in self.betti.iter().enumerate() {
            for (j, b) in other.betti.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PoincarePolynomial { betti: out }
    }

    /// `P(S^k)`; for `k = 0` this is two points.
    pub fn sphere(k: u32) -> PoincarePolynomial {
        let mut betti = vec![0; k as usize + 1];
        betti[0] += 1;
        betti[k as usize] += 1;
        PoincarePolynomial { betti }
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.betti.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Homology of a connected sum of sphere products: one class in degrees 0
/// and `d`, and each summand `S^a × S^b` contributes its middle classes.
pub fn connected_sum_betti(summands: &[SphereProductSummand]) -> Result<PoincarePolynomial, TopologyError> {
    let first = summands.first().ok_or(TopologyError::EmptySum)?;
    let d = first.dimension();
    for s in summands {
        if s.a == 0 || s.b == 0 {
            return Err(TopologyError::InvalidSummand(s.a, s.b));
        }
        if s.dimension() != d {
            return Err(TopologyError::InconsistentDimensions(d, s.dimension()));
        }
    }
    let mut betti = vec![0u64; d as usize + 1];
    betti[0] = 1;
    betti[d as usize] = 1;
    for s in summands {
        betti[s.a as usize] += s.multiplicity;
        betti[s.b as usize] += s.multiplicity;
    }
    Ok(PoincarePolynomial { betti })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiffeotypeKind {
    ConnectedSum {
        summands: Vec<SphereProductSummand>,
    },
    /// `S^a × S^b`; `a` or `b` may be 0.
    Product {
        a: u32,
        b: u32,
    },
    /// `S² × S²`, the `n = 1` case of `Y`.
    Special,
    /// The Stiefel manifold `V_{2s,2}` of orthonormal 2-frames in `ℝ^{2s}`.
    Stiefel {
        s: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffeotypeDescriptor {
    #[serde(flatten)]
    pub kind: DiffeotypeKind,
    pub dimension: u32,
}

impl DiffeotypeDescriptor {
    pub fn product(a: u32, b: u32) -> Self {
        DiffeotypeDescriptor { kind: DiffeotypeKind::Product { a, b }, dimension: a + b }
    }

    pub fn connected_sum(summands: Vec<SphereProductSummand>) -> Result<Self, TopologyError> {
        let dimension = connected_sum_betti(&summands)?.top_degree() as u32;
        Ok(DiffeotypeDescriptor { kind: DiffeotypeKind::ConnectedSum { summands }, dimension })
    }

    pub fn stiefel(s: u32) -> Self {
        DiffeotypeDescriptor { kind: DiffeotypeKind::Stiefel { s }, dimension: 4 * s - 3 }
    }

    pub fn special() -> Self {
        DiffeotypeDescriptor { kind: DiffeotypeKind::Special, dimension: 4 }
    }

    /// Real Poincaré polynomial. `V_{2s,2}` is the unit tangent bundle of
    /// `S^{2s−1}`, whose Euler class vanishes, so it has the real
    /// cohomology of `S^{2s−1} × S^{2s−2}`.
    pub fn poincare(&self) -> PoincarePolynomial {
        match &self.kind {
            DiffeotypeKind::ConnectedSum { summands } => {
                connected_sum_betti(summands).expect("validated at construction")
            }
            DiffeotypeKind::Product { a, b } => PoincarePolynomial::sphere(*a).times(&PoincarePolynomial::sphere(*b)),
            DiffeotypeKind::Special => PoincarePolynomial::sphere(2).times(&PoincarePolynomial::sphere(2)),
            DiffeotypeKind::Stiefel { s } => {
                PoincarePolynomial::sphere(2 * s - 1).times(&PoincarePolynomial::sphere(2 * s - 2))
            }
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            DiffeotypeKind::ConnectedSum { summands } => {
                summands.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" # ")
            }
            DiffeotypeKind::Product { a, b } => format!("S^{a}xS^{b}"),
            DiffeotypeKind::Special => "S^2xS^2".to_string(),
            DiffeotypeKind::Stiefel { s } => format!("V_{{{},2}}", 2 * s),
        }
    }
}

/// Outcome of [`predicted_type`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Prediction {
    Known {
        descriptor: DiffeotypeDescriptor,
        /// Which closed-form result produced the prediction.
        source: &'static str,
        note: Option<&'static str>,
    },
    NoPrediction {
        reason: String,
    },
}

impl Prediction {
    pub fn descriptor(&self) -> Option<&DiffeotypeDescriptor> {
        match self {
            Prediction::Known { descriptor, .. } => Some(descriptor),
            Prediction::NoPrediction { .. } => None,
        }
    }
}

/// Note attached to the `n = 1` complex prediction.
pub const N1_MULTIPLICITY_NOTE: &str = "the connected-sum formula read literally at n = 1 gives two copies of \
     S^2xS^2, but X = S^2xS^2 directly; the single copy is returned";

/// Summands `#_{k=1}^{⌈n/2⌉} #_{C(n+1,k)} S^{n+k} × S^{2n+1−k}` of the
/// complex standard variety.
pub fn complex_case_summands(n: u32) -> Vec<SphereProductSummand> {
    let top = if n == 1 { 1 } else { n / 2 };
    (1..=top).map(|k| SphereProductSummand::new(n + k, 2 * n + 1 - k, binomial(n + 1, k))).collect()
}

/// Summands `#_{2ⁿ−1} Sⁿ × Sⁿ` of the real standard variety.
pub fn real_case_summands(n: u32) -> Vec<SphereProductSummand> {
    vec![SphereProductSummand::new(n, n, (1u64 << n) - 1)]
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Predicted diffeomorphism type of `Y(λ, s)`.
///
/// Cases, in order:
/// 1. `n = 2`, `m = 0`: the Stiefel manifold `V_{2s,2}`.
/// 2. `s = 1`, origin not in `conv(λ)`: `S^{2m} × S^{n−1}` (complex field).
/// 3. `s = 1`, `m = n + 1`, origin in `conv(λ)`: the standard `Y` (the frame
///    spans a simplex around the origin): `S² × S²` for `n = 1`, otherwise the
///    complex or real connected sum.
/// 4. `n = 2`, real field: origin not in hull gives `S^{m+2s−2} × S^{2s−1}`,
///    `m = 3` with origin in hull gives `#₃ S^{2s} × S^{2s}`.
/// 5. `n = 2`, complex field, origin not in hull: each complex `Z_k` counts as
///    two real coordinates, giving `S^{2m+2s−2} × S^{2s−1}`.
///
/// Everything else yields [`Prediction::NoPrediction`].
pub fn predicted_type(spec: &VarietySpec) -> Result<Prediction, TopologyError> {
    if !weakly_hyperbolic(spec.frame()) {
        return Err(TopologyError::NotWeaklyHyperbolic);
    }
    let n = spec.n() as u32;
    let m = spec.m() as u32;
    let s = spec.s() as u32;
    let contains = origin_in_hull(spec.frame());
    let known = |descriptor, source| Ok(Prediction::Known { descriptor, source, note: None });

    if n == 2 && m == 0 {
        return known(DiffeotypeDescriptor::stiefel(s), "stiefel");
    }
    if s == 1 && !contains && spec.field() == Field::Complex {
        return known(DiffeotypeDescriptor::product(2 * m, n - 1), "one-sided-frame");
    }
    if s == 1 && m == n + 1 && contains {
        return match (spec.field(), n) {
            (Field::Complex, 1) => Ok(Prediction::Known {
                descriptor: DiffeotypeDescriptor::special(),
                source: "n1-sphere-product",
                note: Some(N1_MULTIPLICITY_NOTE),
            }),
            (Field::Complex, _) => {
                known(DiffeotypeDescriptor::connected_sum(complex_case_summands(n))?, "complex-connected-sum")
            }
            (Field::Real, _) => {
                known(DiffeotypeDescriptor::connected_sum(real_case_summands(n))?, "real-connected-sum")
            }
        };
    }
    if n == 2 {
        match (spec.field(), contains) {
            (Field::Real, false) => {
                return known(DiffeotypeDescriptor::product(m + 2 * s - 2, 2 * s - 1), "n2-one-sided");
            }
            (Field::Real, true) if m == 3 => {
                let sum = vec![SphereProductSummand::new(2 * s, 2 * s, 3)];
                return known(DiffeotypeDescriptor::connected_sum(sum)?, "n2-three-vectors");
            }
            (Field::Complex, false) => {
                return known(DiffeotypeDescriptor::product(2 * m + 2 * s - 2, 2 * s - 1), "n2-one-sided");
            }
            _ => {}
        }
    }
    Ok(Prediction::NoPrediction {
        reason: format!(
            "no closed form for n = {n}, m = {m}, s = {s}, {} field, origin {} the hull",
            spec.field(),
            if contains { "in" } else { "not in" }
        ),
    })
}

/// Fixed set `Y^L ≈ S^{2m'} × S^{n−1}` of a coordinate subtorus `L` with
/// `fixed_circle_count` circles, `m' = n + 1 − fixed_circle_count`.
pub fn fixed_set_prediction(
    spec: &VarietySpec,
    fixed_circle_count: usize,
) -> Result<DiffeotypeDescriptor, TopologyError> {
    if !spec.is_standard() {
        return Err(TopologyError::NonStandardSpec);
    }
    let max = spec.n() + 1;
    if fixed_circle_count == 0 || fixed_circle_count > max {
        return Err(TopologyError::FixedCircleCount { count: fixed_circle_count, max });
    }
    let rest = (max - fixed_circle_count) as u32;
    Ok(DiffeotypeDescriptor::product(2 * rest, spec.n() as u32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Freeness {
    Free,
    TorsionFreeNotFree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreenessVerdict {
    pub verdict: Freeness,
    pub manifold_betti_sum: u64,
    pub fixed_set_betti_sum: u64,
}

/// Compare total Betti numbers of `Y(λ, s)` and its torus-fixed set
/// (`Z = 0`): equal sums mean free equivariant cohomology.
pub fn freeness_verdict(spec: &VarietySpec) -> Result<FreenessVerdict, TopologyError> {
    let sum_of = |p: Prediction| match p {
        Prediction::Known { descriptor, .. } => Ok(descriptor.poincare().betti_sum()),
        Prediction::NoPrediction { reason } => Err(TopologyError::NoPrediction(reason)),
    };
    let manifold_betti_sum = sum_of(predicted_type(spec)?)?;
    let fixed_set_betti_sum = sum_of(predicted_type(&spec.fixed_set_spec())?)?;
    let verdict = if manifold_betti_sum == fixed_set_betti_sum { Freeness::Free } else { Freeness::TorsionFreeNotFree };
    Ok(FreenessVerdict { verdict, manifold_betti_sum, fixed_set_betti_sum })
}

/// Which fixed-set component a point `(0, V, W)` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedComponent {
    /// `V = 0`, `|W| = 1`.
    VZero,
    /// `W = 0`, `|V| = 1`.
    WZero,
}

pub const FIXED_POINT_TOL: f64 = 1e-10;

pub fn classify_fixed_point(v: &AlgebraElement, w: &AlgebraElement) -> Option<FixedComponent> {
    let on_sphere = |x: &AlgebraElement| (x.norm() - 1.0).abs() <= FIXED_POINT_TOL;
    if v.norm() <= FIXED_POINT_TOL && on_sphere(w) {
        Some(FixedComponent::VZero)
    } else if w.norm() <= FIXED_POINT_TOL && on_sphere(v) {
        Some(FixedComponent::WZero)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub samples: usize,
    pub violations: usize,
    pub v_zero: usize,
    pub w_zero: usize,
    pub component_count: usize,
    /// Largest `min(|V|, |W|)` over the fixed samples.
    pub max_small_factor: f64,
    pub generic_checked: usize,
    pub generic_moved: usize,
    /// Smallest displacement of a generic point under the generic torus element.
    pub min_generic_displacement: f64,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.component_count == 2 && self.generic_moved == self.generic_checked
    }
}

/// Sample the set `{Z = 0} ∩ Y` and check that every point has `V = 0` or
/// `W = 0`, and that points with `Z ≠ 0` are moved by a generic torus
/// element.
pub fn verify_fixed_points(spec: &VarietySpec, seed: u64, count: usize) -> Result<FixedPointReport, TopologyError> {
    if spec.s() != 1 {
        return Err(TopologyError::PairCount(spec.s()));
    }
    let fixed = variety::sample(&spec.fixed_set_spec(), seed, count)?;
    let mut v_zero = 0;
    let mut w_zero = 0;
    let mut violations = 0;
    let mut max_small_factor: f64 = 0.0;
    for p in &fixed {
        let (v, w) = (&p.v[0], &p.w[0]);
        max_small_factor = max_small_factor.max(v.norm().min(w.norm()));
        match classify_fixed_point(v, w) {
            Some(FixedComponent::VZero) => v_zero += 1,
            Some(FixedComponent::WZero) => w_zero += 1,
            None => violations += 1,
        }
    }
    let component_count = usize::from(v_zero > 0) + usize::from(w_zero > 0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let m = spec.m();
    let generic = if m == 0 { Vec::new() } else { variety::sample(spec, seed.wrapping_add(1), count)? };
    let mut generic_moved = 0;
    let mut min_disp = f64::INFINITY;
    for p in &generic {
        let g = match spec.field() {
            Field::Complex => {
                TorusElement::from_angles(&(0..m).map(|_| rng.random_range(0.5..5.5)).collect::<Vec<_>>())
            }
            Field::Real => TorusElement::signs(&vec![true; m]),
        };
        let q = variety::act(spec, &g, p)?;
        let disp = q.max_abs_diff(p);
        min_disp = min_disp.min(disp);
        if disp > FIXED_POINT_TOL {
            generic_moved += 1;
        }
    }
    Ok(FixedPointReport {
        samples: fixed.len(),
        violations,
        v_zero,
        w_zero,
        component_count,
        max_small_factor,
        generic_checked: generic.len(),
        generic_moved,
        min_generic_displacement: if generic.is_empty() { 0.0 } else { min_disp },
    })
}
