//! Seeded point sampling by Gauss–Newton projection onto the cone `F = 0`.
//!
//! `F` is homogeneous of degree 2, so its zero set is a cone and a point
//! on it can be moved radially onto the unit sphere `F₀ = 0` without
//! leaving it. The iterate is kept on the unit sphere throughout, which
//! prevents collapse onto the apex. Note that the resulting distribution is
//! not the uniform measure on the manifold.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{eval_unchecked, jacobian_unchecked, lift_from_vw, weakly_hyperbolic, PointY, VarietyError, VarietySpec};
use crate::algebra::AlgebraElement;

/// Residual bound `‖(F₀, F)‖` every returned sample satisfies.
pub const SAMPLE_RESIDUAL: f64 = 1e-10;

const CONVERGED: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100;
const MAX_DRAWS: usize = 64;
const MIN_DAMPING: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOutcome {
    /// Unit-norm real coordinates with `‖F‖ ≤ 1e-12`.
    pub coords: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

fn f_residual(spec: &VarietySpec, x: &[f64]) -> (DVector<f64>, PointY) {
    let p = PointY::from_real_coords(spec, x).expect("coordinate length matches spec");
    let r = eval_unchecked(spec, &p);
    (DVector::from_column_slice(r.f.coeffs()), p)
}

/// Damped Gauss–Newton with pseudoinverse steps: `x ← N(x − t J_F⁺ F(x))`,
/// where `N` rescales to the unit sphere and `t` halves whenever a step
/// fails to decrease `‖F‖`. Returns `None` after 100 iterations.
pub fn project_to_cone(spec: &VarietySpec, start: &[f64]) -> Option<ProjectionOutcome> {
    let mut x = start.to_vec();
    if normalize(&mut x) == 0.0 {
        return None;
    }
    let n = spec.n();
    let (mut f, mut p) = f_residual(spec, &x);
    let mut residual = f.norm();
    let mut damping = 1.0;
    for iterations in 0..MAX_ITERATIONS {
        if residual <= CONVERGED {
            return Some(ProjectionOutcome { coords: x, iterations, residual });
        }
        let jac = jacobian_unchecked(spec, &p);
        let jf: DMatrix<f64> = jac.rows(1, n).clone_owned();
        let step = jf.svd(true, true).solve(&f, 1e-14).ok()?;
        let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - damping * d).collect();
        normalize(&mut trial);
        let (tf, tp) = f_residual(spec, &trial);
        let tr = tf.norm();
        if tr < residual {
            x = trial;
            f = tf;
            p = tp;
            residual = tr;
            damping = (damping * 2.0).min(1.0);
        } else {
            damping *= 0.5;
            if damping < MIN_DAMPING {
                return None;
            }
        }
    }
    (residual <= CONVERGED).then_some(ProjectionOutcome { coords: x, iterations: MAX_ITERATIONS, residual })
}

/// Random generator for sample `index` of a run seeded with `seed`. Each
/// index gets its own ChaCha stream, so output is independent of how the
/// work is split across threads.
fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_one(spec: &VarietySpec, rng: &mut ChaCha8Rng) -> Result<PointY, VarietyError> {
    for _ in 0..MAX_DRAWS {
        let start: Vec<f64> = (0..spec.ambient_dim()).map(|_| rng.sample(StandardNormal)).collect();
        let Some(out) = project_to_cone(spec, &start) else { continue };
        let p = PointY::from_real_coords(spec, &out.coords)?;
        if eval_unchecked(spec, &p).norm() <= SAMPLE_RESIDUAL {
            return Ok(p);
        }
    }
    Err(VarietyError::NonConvergence { attempts: MAX_DRAWS })
}

/// `count` points of the variety, deterministic in `seed`.
pub fn sample(spec: &VarietySpec, seed: u64, count: usize) -> Result<Vec<PointY>, VarietyError> {
    if !weakly_hyperbolic(spec.frame()) {
        return Err(VarietyError::NotWeaklyHyperbolic);
    }
    (0..count as u64).into_par_iter().map(|i| draw_one(spec, &mut stream_rng(seed, i))).collect()
}

/// Samples of the slice `Y₊` (all `Z_k` real and non-negative).
pub fn sample_positive(spec: &VarietySpec, seed: u64, count: usize) -> Result<Vec<PointY>, VarietyError> {
    Ok(sample(spec, seed, count)?.into_iter().map(|p| p.folded()).collect())
}

/// Points on the boundary of `Y₊` of the standard variety: `Z_j = 0` for a
/// randomly chosen `j`, all other `Z_k ≥ 0`.
///
/// A random direction `(V₀, W₀)` is scaled by `r` so that the barycentric
/// weight `t_j` of the lift vanishes, `r² = 1 / (|V₀|² + |W₀|² + 2⟨λ_j, V₀W₀⟩)`,
/// and the draw is kept if the remaining weights are non-negative.
pub fn sample_boundary(spec: &VarietySpec, seed: u64, count: usize) -> Result<Vec<PointY>, VarietyError> {
    spec.require_standard()?;
    let dim = spec.dim();
    let n = spec.n();
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0x5eed_b0da_u64, i);
            for _ in 0..1024 {
                let j = rng.random_range(0..=n);
                let mut gauss = || {
                    let c: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    AlgebraElement::from_slice(dim, &c).expect("length n")
                };
                let v0 = gauss();
                let w0 = gauss();
                let denom = v0.norm_sqr() + w0.norm_sqr() + 2.0 * spec.frame().vectors()[j].inner(&(v0 * w0));
                if denom <= 0.0 {
                    continue;
                }
                let r = denom.sqrt().recip();
                let (v, w) = (v0 * r, w0 * r);
                if let Some(mut p) = lift_from_vw(spec, &v, &w)? {
                    p.z[j].re = 0.0;
                    return Ok(p);
                }
            }
            Err(VarietyError::NonConvergence { attempts: 1024 })
        })
        .collect()
}
