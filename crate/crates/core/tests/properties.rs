use divquad::formats;
use divquad::maps;
use divquad::simplex::{build_lambda, reconstruct, span_coords, span_embed, SpanCoords};
use divquad::topology::{connected_sum_betti, SphereProductSummand};
use divquad::variety::{eval_defining, jacobian, lift_from_vw};
use divquad::{AlgebraDim, AlgebraElement, Field, PointY, VarietySpec};
use proptest::prelude::*;

fn dim() -> impl Strategy<Value = AlgebraDim> {
    prop::sample::select(AlgebraDim::ALL.to_vec())
}

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![Field::Real, Field::Complex])
}

fn nonzero(d: AlgebraDim) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(-10.0f64..10.0, d.get())
        .prop_filter("nonzero", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-6)
        .prop_map(move |c| AlgebraElement::from_slice(d, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
    dim().prop_flat_map(|d| (nonzero(d), nonzero(d), nonzero(d)))
}

fn ambient() -> impl Strategy<Value = (VarietySpec, Vec<f64>)> {
    (dim(), field()).prop_flat_map(|(d, f)| {
        let spec = VarietySpec::standard(d, f);
        let len = spec.ambient_dim();
        (Just(spec), prop::collection::vec(-3.0f64..3.0, len))
    })
}

proptest! {
    #[test]
    fn composition_law((a, b, _c) in triple()) {
        let scale = a.norm() * b.norm();
        prop_assert!(((a * b).norm() - scale).abs() <= 1e-12 * scale);
    }

    #[test]
    fn braid_law((a, b, c) in triple()) {
        let lhs = (a * b).inner(&c);
        let rhs = b.inner(&(a.conj() * c));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * a.norm() * b.norm() * c.norm());
    }

    #[test]
    fn alternative_laws((a, b, _c) in triple()) {
        let scale = a.norm_sqr() * b.norm();
        prop_assert!((a * (a * b)).distance(&((a * a) * b)) <= 1e-12 * scale);
        prop_assert!(((b * a) * a).distance(&(b * (a * a))) <= 1e-12 * scale);
        // conjugation reverses products
        prop_assert!((a * b).conj().distance(&(b.conj() * a.conj())) <= 1e-12 * a.norm() * b.norm());
    }

    #[test]
    fn inverse_is_two_sided(a in dim().prop_flat_map(nonzero)) {
        let inv = a.inverse().unwrap();
        let one = AlgebraElement::one(a.dim());
        prop_assert!((a * inv).distance(&one) <= 1e-12);
        prop_assert!((inv * a).distance(&one) <= 1e-12);
    }

    #[test]
    fn reconstruct_is_identity(x in dim().prop_flat_map(nonzero)) {
        let f = build_lambda(x.dim());
        prop_assert!(reconstruct(&f, &x).unwrap().distance(&x) <= 1e-12 * x.norm());
    }

    #[test]
    fn span_roundtrip((v, w, _c) in triple()) {
        let f = build_lambda(v.dim());
        let back = span_coords(&f, &span_embed(&f, &SpanCoords { v, w })).unwrap();
        let scale = v.norm().max(w.norm());
        prop_assert!(back.v.distance(&v) <= 1e-12 * scale);
        prop_assert!(back.w.distance(&w) <= 1e-12 * scale);
    }

    #[test]
    fn lambda_combination_vanishes_only_for_constants(
        (d, c) in dim().prop_flat_map(|d| (Just(d), prop::collection::vec(-5.0f64..5.0, d.get() + 1)))
    ) {
        let f = build_lambda(d);
        let n = d.get() as f64;
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        let dev: f64 = c.iter().map(|x| (x - mean).powi(2)).sum();
        // Gram matrix (n+1)/n·I − 1/n·J gives |Σ c_k λ_k|² = (n+1)/n · Σ(c_k − mean)²
        let combo = f.combination(&c).unwrap().norm();
        prop_assert!((combo - ((n + 1.0) / n * dev).sqrt()).abs() <= 1e-12 * (1.0 + combo));
        let constant = f.combination(&vec![mean; c.len()]).unwrap().norm();
        prop_assert!(constant <= 1e-12 * mean.abs().max(1.0));
    }

    #[test]
    fn relation_holds_off_the_variety((spec, x) in ambient()) {
        let p = PointY::from_real_coords(&spec, &x).unwrap();
        let scale = 1.0f64.max(2.0 * (spec.n() + 1) as f64 * p.norm_sqr());
        prop_assert!(maps::gf_relation_residual(&spec, &p).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn jacobian_matches_finite_differences((spec, x) in ambient()) {
        let p = PointY::from_real_coords(&spec, &x).unwrap();
        let j = jacobian(&spec, &p).unwrap();
        let eval = |x: &[f64]| {
            let r = eval_defining(&spec, &PointY::from_real_coords(&spec, x).unwrap()).unwrap();
            std::iter::once(r.f0).chain(r.f.coeffs().iter().copied()).collect::<Vec<_>>()
        };
        let h = 1e-6;
        for col in 0..x.len() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[col] += h;
            xm[col] -= h;
            let (fp, fm) = (eval(&xp), eval(&xm));
            for row in 0..fp.len() {
                // F is quadratic, so central differences are exact up to rounding
                prop_assert!(((fp[row] - fm[row]) / (2.0 * h) - j[(row, col)]).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn solve_pq_inverts_its_inputs(x in 0.0f64..2.0, t in 0.0f64..1.0) {
        let y = x * t;
        let (a, b) = maps::solve_pq(x * x + y * y, x * y).unwrap();
        prop_assert!((a - x).abs() <= 1e-7 && (b - y).abs() <= 1e-7);
        prop_assert!(a >= b && b >= 0.0);
    }

    #[test]
    fn lifted_points_roundtrip(
        (d, v, w) in dim().prop_flat_map(|d| (
            Just(d),
            prop::collection::vec(-0.4f64..0.4, d.get()),
            prop::collection::vec(-0.4f64..0.4, d.get()),
        ))
    ) {
        let spec = VarietySpec::standard(d, Field::Complex);
        let (v, w) = (AlgebraElement::from_slice(d, &v).unwrap(), AlgebraElement::from_slice(d, &w).unwrap());
        if let Some(p) = lift_from_vw(&spec, &v, &w).unwrap() {
            prop_assert!(eval_defining(&spec, &p).unwrap().norm() <= 1e-10);
            let c = maps::psi(&maps::phi(&spec, &p).unwrap()).unwrap();
            prop_assert!(c.sphere_residual().abs() <= 1e-12);
            let q = maps::inverse_psi_phi(&spec, &c).unwrap();
            prop_assert!(q.max_abs_diff(&maps::gauge_fixed(&p)) <= 1e-9);
        }
    }

    #[test]
    fn connected_sums_satisfy_duality(
        d in 2u32..30,
        parts in prop::collection::vec((1u32..29, 1u64..50), 1..6)
    ) {
        let summands: Vec<_> = parts
            .into_iter()
            .filter(|(a, _)| *a < d)
            .map(|(a, k)| SphereProductSummand::new(a, d - a, k))
            .collect();
        prop_assume!(!summands.is_empty());
        let p = connected_sum_betti(&summands).unwrap();
        prop_assert!(p.satisfies_duality());
        prop_assert_eq!(p.betti[0], 1);
        prop_assert_eq!(p.betti[d as usize], 1);
        let total: u64 = summands.iter().map(|s| 2 * s.multiplicity).sum();
        prop_assert_eq!(p.betti_sum(), total + 2);
        if d % 2 == 1 {
            prop_assert_eq!(p.euler_characteristic(), 0);
        }
    }

    #[test]
    fn floats_roundtrip_through_text(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(formats::format_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
