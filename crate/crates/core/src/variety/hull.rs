//! Convex-hull membership of the origin, decided by phase-one simplex LPs.
//!
//! For a subset `S` of the vectors, the origin lies in `conv(S)` iff
//! `{c ≥ 0, Σc = 1, Σ c_k λ_k = 0}` is feasible. Otherwise Gordan's
//! alternative gives a direction `d` with `⟨d, λ_k⟩ ≥ 1` for all `k ∈ S`,
//! found as a feasible point of a second LP. Either way the answer comes
//! with a certificate that can be checked without trusting the solver.

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::simplex::LambdaFrame;

/// Feasibility tolerance of the LPs.
pub const HULL_TOL: f64 = 1e-9;

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum HullCertificate {
    /// Convex coefficients on `subset` whose combination is the origin.
    Contains { subset: Vec<usize>, coefficients: Vec<f64> },
    /// For every tested subset, a direction strictly positive on it.
    Separated { directions: Vec<(Vec<usize>, Vec<f64>)> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullDecision {
    pub contains_origin: bool,
    pub certificate: HullCertificate,
}

impl HullDecision {
    /// Recheck the certificate against `vectors`; returns the worst
    /// violation (0 for a perfect certificate).
    pub fn certificate_violation(&self, vectors: &[AlgebraElement]) -> f64 {
        match &self.certificate {
            HullCertificate::Contains { subset, coefficients } => {
                let Some(first) = vectors.first() else { return f64::INFINITY };
                let mut acc = AlgebraElement::zero(first.dim());
                let mut neg: f64 = 0.0;
                for (&k, &c) in subset.iter().zip(coefficients) {
                    acc += vectors[k] * c;
                    neg = neg.max(-c);
                }
                let total: f64 = coefficients.iter().sum();
                acc.norm().max(neg).max((total - 1.0).abs())
            }
            HullCertificate::Separated { directions } => {
                let mut worst: f64 = 0.0;
                for (subset, d) in directions {
                    for &k in subset {
                        let dot: f64 = vectors[k].coeffs().iter().zip(d).map(|(a, b)| a * b).sum();
                        // a valid direction has ⟨d, λ_k⟩ ≥ 1
                        worst = worst.max(1.0 - dot);
                    }
                }
                worst.max(0.0)
            }
        }
    }
}

/// Whether some subset of at most `max_subset_size` vectors has the origin
/// in its convex hull.
///
/// A hull containing the origin stays that way when vectors are added, so
/// only subsets of size `min(max_subset_size, len)` are enumerated.
pub fn hull_membership(vectors: &[AlgebraElement], max_subset_size: usize) -> HullDecision {
    let size = max_subset_size.min(vectors.len());
    if size == 0 {
        return HullDecision {
            contains_origin: false,
            certificate: HullCertificate::Separated { directions: Vec::new() },
        };
    }
    let mut directions = Vec::new();
    for subset in Combinations::new(vectors.len(), size) {
        let chosen: Vec<&AlgebraElement> = subset.iter().map(|&k| &vectors[k]).collect();
        match convex_coefficients(&chosen) {
            Ok(coefficients) => {
                return HullDecision {
                    contains_origin: true,
                    certificate: HullCertificate::Contains { subset, coefficients },
                }
            }
            Err(best_effort) => match separating_direction(&chosen) {
                Some(d) => directions.push((subset, d)),
                // Both LPs failed: the origin sits within rounding of the
                // hull boundary, so report it as contained.
                None => {
                    return HullDecision {
                        contains_origin: true,
                        certificate: HullCertificate::Contains { subset, coefficients: best_effort },
                    }
                }
            },
        }
    }
    HullDecision { contains_origin: false, certificate: HullCertificate::Separated { directions } }
}

/// Whether the origin lies in the convex hull of the whole frame.
pub fn origin_in_hull(frame: &LambdaFrame) -> bool {
    hull_membership(frame.vectors(), frame.len()).contains_origin
}

/// No `n` or fewer frame vectors contain the origin in their convex hull.
pub fn weakly_hyperbolic(frame: &LambdaFrame) -> bool {
    !hull_membership(frame.vectors(), frame.dim().get()).contains_origin
}

fn convex_coefficients(vectors: &[&AlgebraElement]) -> Result<Vec<f64>, Vec<f64>> {
    let k = vectors.len();
    let n = vectors[0].dim().get();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        a.push(vectors.iter().map(|v| v.coeffs()[i]).collect::<Vec<_>>());
        b.push(0.0);
    }
    a.push(vec![1.0; k]);
    b.push(1.0);
    let (x, infeasibility) = phase_one(&a, &b);
    if infeasibility <= HULL_TOL {
        Ok(x)
    } else {
        Err(x)
    }
}

fn separating_direction(vectors: &[&AlgebraElement]) -> Option<Vec<f64>> {
    let k = vectors.len();
    let n = vectors[0].dim().get();
    // variables: d⁺ (n), d⁻ (n), slack (k);  ⟨d⁺ − d⁻, λ_i⟩ − s_i = 1
    let mut a = Vec::with_capacity(k);
    for (i, v) in vectors.iter().enumerate() {
        let mut row = vec![0.0; 2 * n + k];
        for j in 0..n {
            row[j] = v.coeffs()[j];
            row[n + j] = -v.coeffs()[j];
        }
        row[2 * n + i] = -1.0;
        a.push(row);
    }
    let b = vec![1.0; k];
    let (x, infeasibility) = phase_one(&a, &b);
    if infeasibility > HULL_TOL {
        return None;
    }
    let d: Vec<f64> = (0..n).map(|j| x[j] - x[n + j]).collect();
    let ok = vectors.iter().all(|v| v.coeffs().iter().zip(&d).map(|(p, q)| p * q).sum::<f64>() > 0.0);
    ok.then_some(d)
}

/// Phase-one simplex for `{A x = b, x ≥ 0}` with Bland's rule. Returns the
/// final basic solution and the remaining artificial mass (zero iff feasible).
fn phase_one(a: &[Vec<f64>], b: &[f64]) -> (Vec<f64>, f64) {
    let rows = a.len();
    let vars = a.first().map_or(0, |r| r.len());
    let cols = vars + rows;
    let mut t: Vec<Vec<f64>> = (0..rows)
        .map(|i| {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; cols + 1];
            for j in 0..vars {
                row[j] = sign * a[i][j];
            }
            row[vars + i] = 1.0;
            row[cols] = sign * b[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (vars..cols).collect();

    for _ in 0..MAX_PIVOTS {
        // reduced cost of column j is −Σ_{artificial rows} t[i][j]
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let cost = if j >= vars { 1.0 } else { 0.0 };
            let reduced: f64 =
                cost - t.iter().zip(&basis).filter(|(_, &bi)| bi >= vars).map(|(row, _)| row[j]).sum::<f64>();
            reduced < -PIVOT_EPS
        });
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][e] > PIVOT_EPS {
                let ratio = t[i][cols] / t[i][e];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && basis[i] < basis[li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        let pivot = t[r][e];
        for x in t[r].iter_mut() {
            *x /= pivot;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && row[e] != 0.0 {
                let f = row[e];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        basis[r] = e;
    }

    let mut x = vec![0.0; vars];
    let mut infeasibility = 0.0;
    for (i, &bi) in basis.iter().enumerate() {
        if bi < vars {
            x[bi] = t[i][cols];
        } else {
            infeasibility += t[i][cols].abs();
        }
    }
    (x, infeasibility)
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
