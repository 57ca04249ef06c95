//! Verification suites. Each suite runs a batch of randomized identity
//! checks and returns one [`Check`] per property, listing every check even
//! when it passes.
//!
//! Randomness comes from a ChaCha stream per (seed, suite, dimension), so
//! every suite is deterministic in its seed.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{basis_associativity_witness, AlgebraDim, AlgebraElement};
use crate::maps::{self, CompactifiedPoint, MapError};
use crate::simplex::{build_lambda, reconstruct, span_coords, span_embed, LambdaFrame, SpanCoords};
use crate::topology::{
    self, freeness_verdict, predicted_type, verify_fixed_points, Freeness, Prediction, TopologyError,
};
use crate::variety::{
    self, act, eval_defining, hull_membership, is_regular, jacobian, lift_from_vw, sample, sample_boundary, Field,
    PointY, TorusElement, VarietySpec,
};

/// Result of one named property check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub count: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn flag(name: impl Into<String>, pass: bool, note: Option<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            max_residual: 0.0,
            tolerance: 0.0,
            count: 1,
            failures: usize::from(!pass),
            note,
        }
    }

    /// Check that failed to run because of an error.
    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check::flag(name, false, Some(err.to_string()))
    }
}

/// Accumulates residuals against a tolerance.
#[derive(Debug, Clone)]
pub struct Tally {
    name: String,
    tol: f64,
    strict: bool,
    max: f64,
    count: usize,
    failures: usize,
    note: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>, tol: f64) -> Tally {
        Tally { name: name.into(), tol, strict: false, max: 0.0, count: 0, failures: 0, note: None }
    }

    /// Residuals must be strictly below the tolerance.
    pub fn strict(name: impl Into<String>, tol: f64) -> Tally {
        Tally { strict: true, ..Tally::new(name, tol) }
    }

    pub fn push(&mut self, r: f64) {
        self.count += 1;
        let ok = if self.strict { r < self.tol } else { r <= self.tol };
        if !ok {
            self.failures += 1;
        }
        self.max = if r.is_nan() { f64::INFINITY } else { self.max.max(r) };
    }

    pub fn fail(&mut self) {
        self.count += 1;
        self.failures += 1;
    }

    pub fn note(mut self, note: impl Into<String>) -> Tally {
        self.note = Some(note.into());
        self
    }

    pub fn finish(self) -> Check {
        Check {
            name: self.name,
            pass: self.failures == 0 && self.count > 0,
            max_residual: if self.max.is_finite() { self.max } else { f64::MAX },
            tolerance: self.tol,
            count: self.count,
            failures: self.failures,
            note: self.note,
        }
    }
}

/// Shared options for the suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub dims: Vec<AlgebraDim>,
    pub field: Field,
    pub seed: u64,
    /// Overrides the suite's default sample count.
    pub count: Option<usize>,
    /// Overrides the suite's headline tolerance.
    pub tol: Option<f64>,
}

impl SuiteOptions {
    pub fn all_dims(seed: u64) -> SuiteOptions {
        SuiteOptions { dims: AlgebraDim::ALL.to_vec(), field: Field::Complex, seed, count: None, tol: None }
    }

    fn count_or(&self, default: usize) -> usize {
        self.count.unwrap_or(default)
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

const SUITE_ALGEBRA: u64 = 1;
const SUITE_SIMPLEX: u64 = 2;
const SUITE_VARIETY: u64 = 3;
const SUITE_MAPS: u64 = 4;
const SUITE_TOPOLOGY: u64 = 5;

fn suite_rng(seed: u64, suite: u64, dim: AlgebraDim) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 8) | dim.get() as u64);
    rng
}

fn gaussian_element(rng: &mut ChaCha8Rng, dim: AlgebraDim) -> AlgebraElement {
    let c: Vec<f64> = (0..dim.get()).map(|_| rng.sample(StandardNormal)).collect();
    AlgebraElement::from_slice(dim, &c).expect("length n")
}

fn max_diff(a: &[AlgebraElement], b: &[AlgebraElement]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.distance(y)).fold(0.0, f64::max)
}

fn label(name: &str, dim: AlgebraDim) -> String {
    format!("{name}[n={}]", dim.get())
}

/// Composition law, braid law, alternativity, `Re(ab) = Re(ba)`,
/// involutive conjugation, inverses, and (non-)associativity.
pub fn algebra_suite(opts: &SuiteOptions) -> Vec<Check> {
    let count = opts.count_or(10_000);
    let tol = opts.tol_or(1e-12);
    let mut checks = Vec::new();
    for &dim in &opts.dims {
        let mut rng = suite_rng(opts.seed, SUITE_ALGEBRA, dim);
        let mut composition = Tally::new(label("composition", dim), tol);
        let mut braid = Tally::new(label("braid", dim), tol);
        let mut left_alt = Tally::new(label("left-alternative", dim), tol);
        let mut right_alt = Tally::new(label("right-alternative", dim), tol);
        let mut re_sym = Tally::new(label("re-ab-equals-re-ba", dim), tol);
        let mut involution = Tally::new(label("conj-involution", dim), 0.0);
        let mut inverse = Tally::new(label("inverse", dim), tol);
        let mut assoc = Tally::new(label("associativity", dim), tol);
        for _ in 0..count {
            let a = gaussian_element(&mut rng, dim);
            let b = gaussian_element(&mut rng, dim);
            let c = gaussian_element(&mut rng, dim);
            let (na, nb, nc) = (a.norm(), b.norm(), c.norm());
            let ab = a * b;
            composition.push((ab.norm() - na * nb).abs() / (na * nb));
            braid.push((ab.inner(&c) - b.inner(&(a.conj() * c))).abs() / (na * nb * nc));
            left_alt.push((a * ab).distance(&((a * a) * b)) / (na * na * nb));
            right_alt.push(((b * a) * a).distance(&(b * (a * a))) / (na * na * nb));
            re_sym.push((ab.re() - (b * a).re()).abs() / (na * nb));
            involution.push(a.conj().conj().distance(&a));
            match a.inverse() {
                Ok(inv) => inverse.push((a * inv).distance(&AlgebraElement::one(dim))),
                Err(_) => inverse.fail(),
            }
            if dim.is_associative() {
                assoc.push((ab * c).distance(&(a * (b * c))) / (na * nb * nc));
            }
        }
        checks.extend([composition, braid, left_alt, right_alt, re_sym, involution, inverse].map(Tally::finish));
        if dim.is_associative() {
            checks.push(assoc.finish());
        }
        let witness = basis_associativity_witness(dim);
        let name = label("associativity-witness", dim);
        checks.push(match (dim.is_associative(), witness) {
            (true, None) => Check::flag(name, true, Some("associative: no basis witness".into())),
            (false, Some((i, j, k))) => {
                let (ei, ej, ek) =
                    (AlgebraElement::basis(dim, i), AlgebraElement::basis(dim, j), AlgebraElement::basis(dim, k));
                let gap = ((ei * ej) * ek).distance(&(ei * (ej * ek)));
                Check::flag(name, gap > 1.0, Some(format!("(e{i} e{j}) e{k} != e{i} (e{j} e{k}), gap {gap}")))
            }
            (true, Some(w)) => Check::flag(name, false, Some(format!("unexpected witness {w:?}"))),
            (false, None) => Check::flag(name, false, Some("no witness found".into())),
        });
    }
    checks
}

/// Frame geometry, the linear-dependence lemma, reconstruction and the
/// `Span(λ, 1)` round trip.
pub fn simplex_suite(opts: &SuiteOptions) -> Vec<Check> {
    let count = opts.count_or(1_000);
    let tol = opts.tol_or(1e-12);
    let mut checks = Vec::new();
    for &dim in &opts.dims {
        let n = dim.get();
        let frame = build_lambda(dim);
        let mut rng = suite_rng(opts.seed, SUITE_SIMPLEX, dim);

        let mut gram = Tally::new(label("gram", dim), tol);
        gram.push(frame.standard_gram_deviation().unwrap_or(f64::INFINITY));
        checks.push(gram.finish());
        let mut sum = Tally::new(label("vector-sum", dim), tol);
        sum.push(frame.vector_sum().norm());
        checks.push(sum.finish());

        // |Σ c_k λ_k| ≈ 0 exactly when c is constant; half the draws are constant
        let mut lin = Tally::new(label("linear-relation", dim), 0.0).note("mismatches between the two predicates");
        for i in 0..count {
            let c: Vec<f64> = if i % 2 == 0 {
                vec![rng.sample::<f64, _>(StandardNormal); n + 1]
            } else {
                (0..=n).map(|_| rng.sample(StandardNormal)).collect()
            };
            let mean = c.iter().sum::<f64>() / (n + 1) as f64;
            let spread = c.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
            let combo = frame.combination(&c).expect("length n+1").norm();
            lin.push(f64::from(u8::from((combo <= 1e-12) != (spread <= 1e-9))));
        }
        checks.push(lin.finish());

        let mut recon = Tally::new(label("reconstruct", dim), tol);
        for _ in 0..count {
            let x = gaussian_element(&mut rng, dim);
            match reconstruct(&frame, &x) {
                Ok(y) => recon.push(y.distance(&x) / x.norm()),
                Err(_) => recon.fail(),
            }
        }
        checks.push(recon.finish());

        let mut span = Tally::new(label("span-roundtrip", dim), tol);
        for _ in 0..count {
            let c = SpanCoords { v: gaussian_element(&mut rng, dim), w: gaussian_element(&mut rng, dim) };
            let scale = c.v.norm().max(c.w.norm());
            match span_coords(&frame, &span_embed(&frame, &c)) {
                Ok(back) => span.push(back.v.distance(&c.v).max(back.w.distance(&c.w)) / scale),
                Err(_) => span.fail(),
            }
        }
        checks.push(span.finish());

        checks.push(span_rank_check(&frame));

        if n == 2 {
            let squares = frame.vectors().iter().fold(Complex64::new(0.0, 0.0), |acc, l| {
                let c = Complex64::new(l.coeffs()[0], l.coeffs()[1]);
                acc + c * c
            });
            let mut t = Tally::new("cube-roots-of-unity[n=2]", tol).note("|sum of complex squares|");
            t.push(squares.norm());
            checks.push(t.finish());
        }

        let q = random_orthogonal(&mut rng, n);
        let rotated = frame.transformed(&q).expect("square matrix");
        let mut orth = Tally::new(label("orthogonal-invariance", dim), 1e-12);
        orth.push(rotated.standard_gram_deviation().unwrap_or(f64::INFINITY));
        checks.push(orth.finish());
    }
    checks
}

/// Real rank of `(V, W) ↦ (Vλ_k + W)_k` must be `2n`.
fn span_rank_check(frame: &LambdaFrame) -> Check {
    let dim = frame.dim();
    let n = dim.get();
    let mut cols = Vec::with_capacity(2 * n * (n + 1) * n);
    for j in 0..2 * n {
        let (v, w) = if j < n {
            (AlgebraElement::basis(dim, j), AlgebraElement::zero(dim))
        } else {
            (AlgebraElement::zero(dim), AlgebraElement::basis(dim, j - n))
        };
        for u in span_embed(frame, &SpanCoords { v, w }) {
            cols.extend_from_slice(u.coeffs());
        }
    }
    let m = DMatrix::from_column_slice((n + 1) * n, 2 * n, &cols);
    let sv = variety::singular_values(&m);
    let rank = sv.iter().filter(|&&s| s > 1e-9).count();
    Check::flag(label("span-dimension", dim), rank == 2 * n, Some(format!("rank {rank}, expected {}", 2 * n)))
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = m.qr().q();
    (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect()
}

fn random_torus(rng: &mut ChaCha8Rng, spec: &VarietySpec) -> TorusElement {
    match spec.field() {
        Field::Complex => {
            let angles: Vec<f64> = (0..spec.m()).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            TorusElement::from_angles(&angles)
        }
        Field::Real => TorusElement::signs(&(0..spec.m()).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()),
    }
}

fn jacobian_fd_error(spec: &VarietySpec, p: &PointY) -> f64 {
    const H: f64 = 1e-6;
    let j = jacobian(spec, p).expect("shape checked");
    let x = p.to_real_coords(spec.field());
    let eval = |x: &[f64]| {
        let q = PointY::from_real_coords(spec, x).expect("length");
        let r = eval_defining(spec, &q).expect("shape");
        let mut out = vec![r.f0];
        out.extend_from_slice(r.f.coeffs());
        out
    };
    let mut worst: f64 = 0.0;
    for col in 0..x.len() {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[col] += H;
        xm[col] -= H;
        let (fp, fm) = (eval(&xp), eval(&xm));
        for row in 0..fp.len() {
            worst = worst.max(((fp[row] - fm[row]) / (2.0 * H) - j[(row, col)]).abs());
        }
    }
    worst
}

/// Residual, regularity, torus invariance and (standard spec only)
/// `|VW| < 1/2` over a batch of samples.
pub fn sample_checks(spec: &VarietySpec, points: &[PointY], rng: &mut ChaCha8Rng, tol: f64) -> Vec<Check> {
    let dim = spec.dim();
    let mut checks = Vec::new();
    let mut residual = Tally::new(label("residual", dim), tol);
    let mut regular = Tally::new(label("regular", dim), 0.0).note("count of non-regular points");
    let mut product = Tally::strict(label("product-below-half", dim), 0.5);
    let mut invariance = Tally::new(label("torus-invariance", dim), 1e-14);
    let reports: Vec<_> = points.par_iter().map(|p| is_regular(spec, p, tol)).collect();
    let mut min_sv = f64::INFINITY;
    for (p, rep) in points.iter().zip(&reports) {
        let r = eval_defining(spec, p).expect("shape").norm();
        residual.push(r);
        match rep {
            Ok(rep) => {
                min_sv = min_sv.min(rep.smallest_singular_value);
                regular.push(f64::from(u8::from(!rep.regular)));
            }
            Err(_) => regular.fail(),
        }
        product.push((p.v[0] * p.w[0]).norm());
        let g = random_torus(rng, spec);
        match act(spec, &g, p) {
            Ok(q) => invariance.push((eval_defining(spec, &q).expect("shape").norm() - r).abs()),
            Err(_) => invariance.fail(),
        }
    }
    checks.push(residual.finish());
    let mut reg = regular.finish();
    reg.note = Some(format!("smallest singular value over batch {min_sv:.6e}"));
    reg.max_residual = if min_sv.is_finite() { min_sv } else { 0.0 };
    reg.pass &= min_sv > 1e-6;
    checks.push(reg);
    if spec.is_standard() {
        checks.push(product.finish());
    }
    checks.push(invariance.finish());
    checks
}

/// Samples of the standard variety: residuals, regularity, `|VW| < 1/2`,
/// torus invariance, Jacobian against finite differences, lifts and the
/// real restriction. Also decides the fixed hull and singular-point examples.
pub fn variety_suite(opts: &SuiteOptions) -> Vec<Check> {
    let count = opts.count_or(1_000);
    let tol = opts.tol_or(variety::SAMPLE_RESIDUAL);
    let mut checks = Vec::new();
    for &dim in &opts.dims {
        let spec = VarietySpec::standard(dim, opts.field);
        let points = match sample(&spec, opts.seed, count) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::error(label("sample", dim), e));
                continue;
            }
        };
        let mut rng = suite_rng(opts.seed, SUITE_VARIETY, dim);
        checks.extend(sample_checks(&spec, &points, &mut rng, tol));

        let mut fd = Tally::new(label("jacobian-finite-difference", dim), 1e-6);
        for p in points.iter().take(100) {
            fd.push(jacobian_fd_error(&spec, p));
        }
        checks.push(fd.finish());

        let mut lift = Tally::new(label("lift-from-vw", dim), tol).note("residual of lifted points");
        let mut lifted = 0;
        for _ in 0..count.min(1000) {
            let v = gaussian_element(&mut rng, dim) * 0.3;
            let w = gaussian_element(&mut rng, dim) * 0.3;
            match lift_from_vw(&spec, &v, &w) {
                Ok(Some(p)) => {
                    lifted += 1;
                    let nonneg = p.z.iter().all(|z| z.re >= 0.0 && z.im == 0.0);
                    let r = eval_defining(&spec, &p).expect("shape").norm();
                    lift.push(if nonneg { r } else { f64::INFINITY });
                }
                Ok(None) => {}
                Err(_) => lift.fail(),
            }
        }
        let mut lift = lift.finish();
        lift.pass &= lifted > 0;
        checks.push(lift);

        if opts.field == Field::Real {
            let complex = VarietySpec::standard(dim, Field::Complex);
            let mut t = Tally::new(label("real-restriction", dim), tol);
            for p in &points {
                t.push(eval_defining(&complex, p).expect("same shape").norm());
            }
            checks.push(t.finish());
        }
    }
    checks.push(singular_example_check());
    checks.extend(hull_example_checks());
    checks
}

/// `n = 2`, frame `(1, −1) ⊂ ℂ`, `Z = (1/√2, 1/√2)`, `V = W = 0` lies on
/// `F = 0` but the Jacobian has rank 2 < 3.
pub fn singular_example_check() -> Check {
    let d = AlgebraDim::COMPLEX;
    let frame = LambdaFrame::new(d, vec![AlgebraElement::one(d), -AlgebraElement::one(d)]).expect("frame");
    let spec = VarietySpec::general(frame, 1, Field::Complex).expect("spec");
    let h = 0.5f64.sqrt();
    let p = PointY::with_real_z(&[h, h], AlgebraElement::zero(d), AlgebraElement::zero(d));
    match is_regular(&spec, &p, 1e-10) {
        Ok(rep) => Check {
            name: "singular-example".into(),
            pass: !rep.regular,
            max_residual: rep.smallest_singular_value,
            tolerance: 1e-10,
            count: 1,
            failures: usize::from(rep.regular),
            note: Some(format!("rank {} of {}", rep.rank, rep.rows)),
        },
        Err(e) => Check::error("singular-example", e),
    }
}

fn hull_example_checks() -> Vec<Check> {
    let d = AlgebraDim::COMPLEX;
    let one = AlgebraElement::one(d);
    let cases: Vec<(&str, Vec<AlgebraElement>, usize, bool)> = vec![
        ("hull-zero-vector", vec![one, AlgebraElement::zero(d), AlgebraElement::basis(d, 1)], 1, true),
        ("hull-standard-frame", build_lambda(d).vectors().to_vec(), 2, false),
        ("hull-opposite-pair", vec![one, -one], 2, true),
    ];
    let mut out: Vec<Check> = cases
        .into_iter()
        .map(|(name, vectors, bound, expected)| {
            let dec = hull_membership(&vectors, bound);
            let violation = dec.certificate_violation(&vectors);
            Check {
                name: name.into(),
                pass: dec.contains_origin == expected && violation <= variety::HULL_TOL,
                max_residual: violation,
                tolerance: variety::HULL_TOL,
                count: 1,
                failures: usize::from(dec.contains_origin != expected || violation > variety::HULL_TOL),
                note: Some(format!("contains_origin = {}", dec.contains_origin)),
            }
        })
        .collect();
    for dim in AlgebraDim::ALL {
        let frame = build_lambda(dim);
        let dec = hull_membership(frame.vectors(), dim.get());
        out.push(Check::flag(label("standard-frame-weakly-hyperbolic", dim), !dec.contains_origin, None));
    }
    out
}

/// The relation `G = M·F`, the `Y ↔ X` round trip and equivariance, the
/// orbit-space round trip, and Hopf-map properties.
pub fn maps_suite(opts: &SuiteOptions) -> Vec<Check> {
    let count = opts.count_or(1_000);
    let ambient_count = opts.count.map_or(10_000, |c| c * 10);
    let mut checks = Vec::new();
    for &dim in &opts.dims {
        let spec = VarietySpec::standard(dim, opts.field);
        let mut rng = suite_rng(opts.seed, SUITE_MAPS, dim);

        let mut gf = Tally::new(label("gf-relation", dim), 1e-12).note("relative to max(1, 2(n+1)|p|^2)");
        for _ in 0..ambient_count {
            let x: Vec<f64> = (0..spec.ambient_dim()).map(|_| rng.sample(StandardNormal)).collect();
            let p = PointY::from_real_coords(&spec, &x).expect("length");
            match maps::gf_relation_residual(&spec, &p) {
                Ok(r) => {
                    let scale = 1.0f64.max(p.norm_sqr() * 2.0 * (spec.n() + 1) as f64);
                    gf.push(r / scale);
                }
                Err(_) => gf.fail(),
            }
        }
        checks.push(gf.finish());

        let m_sv = variety::singular_values(&maps::relation_matrix(&spec));
        let smallest = m_sv.last().copied().unwrap_or(0.0);
        checks.push(Check::flag(
            label("relation-matrix-invertible", dim),
            smallest > 1e-9,
            Some(format!("smallest singular value {smallest:.6e}")),
        ));

        let points = match sample(&spec, opts.seed, count) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::error(label("sample", dim), e));
                continue;
            }
        };
        let tol = opts.tol_or(maps::MAP_TOL);
        let mut yx = Tally::new(label("x-to-y-after-y-to-x", dim), tol);
        let mut sphere = Tally::new(label("y-to-x-on-x", dim), tol);
        let mut equiv = Tally::new(label("y-to-x-equivariance", dim), 1e-12);
        let mut injective = Tally::new(label("y-to-x-z-scaling", dim), 1e-6).note("1 - ratio to sqrt(n+1)");
        let root = ((spec.n() + 1) as f64).sqrt();
        for (i, p) in points.iter().enumerate() {
            match maps::y_to_x(&spec, p) {
                Ok(q) => {
                    let s = variety::eval_sphere(&spec, &q).expect("shape");
                    sphere.push(s.iter().fold(0.0, |a, r| a.max(r.abs())));
                    match maps::x_to_y(&spec, &q) {
                        Ok(back) => yx.push(back.max_abs_diff(p)),
                        Err(_) => yx.fail(),
                    }
                    let g = random_torus(&mut rng, &spec);
                    let gp = act(&spec, &g, p).expect("shape");
                    let lhs = maps::y_to_x(&spec, &gp).expect("on Y");
                    let rhs_z: Vec<Complex64> = q.z.iter().zip(g.entries()).map(|(z, g)| g * z).collect();
                    let dz = lhs.z.iter().zip(&rhs_z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    equiv.push(dz.max(max_diff(&lhs.u, &q.u)));
                    if i > 0 {
                        let prev = &points[i - 1];
                        let dz_in: f64 = p.z.iter().zip(&prev.z).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                        let qp = maps::y_to_x_ambient(&spec, prev);
                        let dz_out: f64 = q.z.iter().zip(&qp.z).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                        if dz_in > 0.0 {
                            injective.push((1.0 - dz_out / (root * dz_in)).max(0.0));
                        }
                    }
                }
                Err(_) => {
                    sphere.fail();
                    yx.fail();
                }
            }
        }
        checks.extend([yx, sphere, equiv, injective].map(Tally::finish));

        checks.extend(roundtrip_checks(&spec, &points, opts.seed, count, tol));

        let mut hopf_norm = Tally::new(label("hopf-norm", dim), 1e-12);
        let mut fiber = Tally::new(label("hopf-fiber", dim), 1e-12);
        for p in &points {
            let (prod, vn, wn) = maps::hopf(&p.v[0], &p.w[0]);
            hopf_norm.push((prod.norm() - vn * wn).abs());
            if dim.is_associative() {
                let u = gaussian_element(&mut rng, dim);
                let u = u * (1.0 / u.norm());
                let (prod2, vn2, wn2) = maps::hopf(&(p.v[0] * u), &(u.conj() * p.w[0]));
                fiber.push(prod2.distance(&prod).max((vn2 - vn).abs()).max((wn2 - wn).abs()));
            }
        }
        checks.push(hopf_norm.finish());
        if dim.is_associative() {
            checks.push(fiber.finish());
        }
    }
    checks
}

/// `inverse_psi_phi ∘ ψ ∘ φ` on folded samples plus boundary points.
///
/// `φ` forgets the direction of `V`, so the full-coordinate identity is
/// checked against the gauge-fixed representative of each point, and the
/// raw points are checked at the level of `φ`-images.
pub fn roundtrip_checks(spec: &VarietySpec, points: &[PointY], seed: u64, count: usize, tol: f64) -> Vec<Check> {
    let dim = spec.dim();
    let boundary_count = (count / 100).max(10);
    let boundary = match sample_boundary(spec, seed, boundary_count) {
        Ok(b) => b,
        Err(e) => return vec![Check::error(label("boundary-sample", dim), e)],
    };
    let mut image = Tally::new(label("roundtrip-phi-image", dim), tol);
    let mut coords = Tally::new(label("roundtrip-gauge-fixed", dim), tol);
    let mut on_y = Tally::new(label("roundtrip-on-y", dim), tol);
    let mut s_plus = Tally::new(label("psi-on-s-plus", dim), CompactifiedPoint::TOL);
    let mut corr = Tally::new(label("boundary-correspondence", dim), 0.0).note("mismatches");
    let mut boundary_seen = 0;
    let folded = points.iter().map(|p| p.folded());
    for (is_boundary, p) in folded.map(|p| (false, p)).chain(boundary.into_iter().map(|p| (true, p))) {
        let step = || -> Result<(maps::PhiImage, CompactifiedPoint, PointY), MapError> {
            let img = maps::phi(spec, &p)?;
            let c = maps::psi(&img)?;
            let q = maps::inverse_psi_phi(spec, &c)?;
            Ok((img, c, q))
        };
        match step() {
            Ok((img, c, q)) => {
                s_plus.push(c.sphere_residual().abs());
                image.push(maps::phi(spec, &q).map(|i| i.max_abs_diff(&img)).unwrap_or(f64::INFINITY));
                coords.push(q.max_abs_diff(&maps::gauge_fixed(&p)));
                on_y.push(maps::defining_residual(spec, &q));
                let z_zero = p.z.iter().any(|z| z.norm() == 0.0);
                let a_zero = c.a.contains(&0.0);
                corr.push(f64::from(u8::from(z_zero != a_zero)));
                if is_boundary && z_zero {
                    boundary_seen += 1;
                }
            }
            Err(_) => {
                image.fail();
                coords.fail();
                on_y.fail();
                s_plus.fail();
            }
        }
    }
    let mut corr = corr.finish();
    corr.note = Some(format!("{boundary_seen} boundary points"));
    corr.pass &= boundary_seen >= 10;
    vec![image.finish(), coords.finish(), on_y.finish(), s_plus.finish(), corr]
}

/// Closed-form predictions with their payloads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRecord {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub field: Field,
    pub prediction: Prediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freeness: Option<topology::FreenessVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variety_dimension: Option<isize>,
}

pub fn prediction_record(label: impl Into<String>, spec: &VarietySpec) -> Result<PredictionRecord, TopologyError> {
    let prediction = predicted_type(spec)?;
    let poincare = prediction.descriptor().map(|d| d.poincare());
    Ok(PredictionRecord {
        label: label.into(),
        n: spec.n(),
        m: spec.m(),
        s: spec.s(),
        field: spec.field(),
        betti: poincare.as_ref().map(|p| p.betti.clone()),
        euler_characteristic: poincare.as_ref().map(|p| p.euler_characteristic()),
        freeness: freeness_verdict(spec).ok(),
        variety_dimension: Some(spec.manifold_dim()),
        prediction,
    })
}

/// Structural checks on one prediction: duality, `b₀ = b_top = 1` (for
/// connected predictions), dimension agreement with the variety and `χ = 0`
/// in odd dimension.
pub fn prediction_checks(record: &PredictionRecord) -> Vec<Check> {
    let Some(desc) = record.prediction.descriptor() else {
        return vec![Check::flag(format!("{}:no-prediction", record.label), true, None)];
    };
    let p = desc.poincare();
    let top = p.top_degree();
    let connected = p.betti[0] == 1;
    vec![
        Check::flag(format!("{}:duality", record.label), p.satisfies_duality(), Some(p.to_string())),
        Check::flag(
            format!("{}:dimension", record.label),
            record.variety_dimension == Some(desc.dimension as isize) && top == desc.dimension as usize,
            Some(format!("predicted {}, variety {}", desc.dimension, record.variety_dimension.unwrap_or(-1))),
        ),
        Check::flag(
            format!("{}:euler", record.label),
            top % 2 == 0 || p.euler_characteristic() == 0,
            Some(format!("chi = {}", p.euler_characteristic())),
        ),
        Check::flag(
            format!("{}:unit-ends", record.label),
            !connected || p.betti[top] == 1,
            Some(format!("b0 = {}, b{top} = {}", p.betti[0], p.betti[top])),
        ),
    ]
}

fn expect_betti(name: &str, spec: &VarietySpec, expected: impl Fn(&[u64]) -> bool) -> Check {
    match predicted_type(spec) {
        Ok(pred) => match pred.descriptor() {
            Some(d) => {
                let b = d.poincare().betti;
                Check::flag(name, expected(&b), Some(format!("betti {b:?}, dimension {}", d.dimension)))
            }
            None => Check::flag(name, false, Some("no prediction".into())),
        },
        Err(e) => Check::error(name, e),
    }
}

/// One-sided frames (origin outside the hull), used for the freeness checks.
pub fn one_sided_specs() -> Vec<VarietySpec> {
    let mut out = Vec::new();
    for dim in AlgebraDim::ALL {
        let one = AlgebraElement::one(dim);
        let mut tilted = AlgebraElement::one(dim);
        if dim.get() > 1 {
            tilted.coeffs_mut()[1] = 0.5;
        }
        for vectors in [vec![one], vec![one, tilted * (1.0 / tilted.norm())]] {
            let frame = LambdaFrame::new(dim, vectors).expect("frame");
            out.push(VarietySpec::general(frame, 1, Field::Complex).expect("spec"));
        }
    }
    out
}

/// Closed-form predictions and the fixed-point sampler.
pub fn topology_suite(opts: &SuiteOptions) -> (Vec<Check>, Vec<PredictionRecord>) {
    let count = opts.count_or(1_000);
    let mut checks = vec![
        expect_betti("betti-complex[n=2]", &VarietySpec::standard(AlgebraDim::COMPLEX, Field::Complex), |b| {
            b == [1, 0, 0, 3, 3, 0, 0, 1]
        }),
        expect_betti("betti-real[n=2]", &VarietySpec::standard(AlgebraDim::COMPLEX, Field::Real), |b| {
            b == [1, 0, 6, 0, 1]
        }),
        expect_betti("betti-complex[n=4]", &VarietySpec::standard(AlgebraDim::QUATERNION, Field::Complex), |b| {
            b.len() == 14 && b[5] == 5 && b[6] == 10 && b[7] == 10 && b[8] == 5
        }),
    ];
    let mut records = Vec::new();
    for field in [Field::Complex, Field::Real] {
        for dim in AlgebraDim::ALL {
            let spec = VarietySpec::standard(dim, field);
            match prediction_record(format!("standard-{field}[n={}]", dim.get()), &spec) {
                Ok(r) => {
                    checks.extend(prediction_checks(&r));
                    records.push(r);
                }
                Err(e) => checks.push(Check::error(format!("predict-{field}[n={}]", dim.get()), e)),
            }
        }
    }
    for dim in AlgebraDim::ALL {
        let spec = VarietySpec::standard(dim, Field::Complex);
        let name = label("freeness-standard", dim);
        checks.push(match freeness_verdict(&spec) {
            Ok(v) => Check::flag(
                name,
                (v.verdict == Freeness::Free) == (dim.get() == 1),
                Some(format!("{:?}: sums {} vs {}", v.verdict, v.manifold_betti_sum, v.fixed_set_betti_sum)),
            ),
            Err(e) => Check::error(name, e),
        });
    }
    for (i, spec) in one_sided_specs().iter().enumerate() {
        let name = format!("freeness-one-sided[n={},m={}]", spec.n(), spec.m());
        match (freeness_verdict(spec), prediction_record(format!("one-sided-{i}"), spec)) {
            (Ok(v), Ok(r)) => {
                checks.push(Check::flag(name, v.verdict == Freeness::Free, Some(format!("{:?}", v.verdict))));
                checks.extend(prediction_checks(&r));
                records.push(r);
            }
            (Err(e), _) | (_, Err(e)) => checks.push(Check::error(name, e)),
        }
    }
    for &dim in &opts.dims {
        let spec = VarietySpec::standard(dim, opts.field);
        checks.push(fixed_point_check(&spec, opts.seed ^ SUITE_TOPOLOGY, count));
    }
    (checks, records)
}

pub fn fixed_point_check(spec: &VarietySpec, seed: u64, count: usize) -> Check {
    let name = format!("fixed-points[n={}]", spec.n());
    match verify_fixed_points(spec, seed, count) {
        Ok(r) => Check {
            name,
            pass: r.passed(),
            max_residual: r.max_small_factor,
            tolerance: topology::FIXED_POINT_TOL,
            count: r.samples,
            failures: r.violations,
            note: Some(format!(
                "components {} (V=0: {}, W=0: {}), generic moved {}/{}",
                r.component_count, r.v_zero, r.w_zero, r.generic_moved, r.generic_checked
            )),
        },
        Err(e) => Check::error(name, e),
    }
}

/// Convenience for callers that treat suite failures as a single error.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
