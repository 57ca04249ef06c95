//! Worked examples with hand-computed expected values.

use divquad::maps::{self, CompactifiedPoint};
use divquad::simplex::{build_lambda, span_coords, span_embed, SpanCoords};
use divquad::topology::{fixed_set_prediction, freeness_verdict, predicted_type, DiffeotypeDescriptor, Freeness};
use divquad::variety::{eval_defining, eval_sphere, hull_membership, is_regular, lift_from_vw};
use divquad::{AlgebraDim, AlgebraElement, Field, LambdaFrame, PointY, VarietySpec};

const EPS: f64 = 1e-15;

fn el(dim: AlgebraDim, c: &[f64]) -> AlgebraElement {
    AlgebraElement::from_slice(dim, c).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn complex_and_quaternion_products() {
    let c = AlgebraDim::COMPLEX;
    // (1 + 2i)(3 − i) = 3 − i + 6i + 2 = 5 + 5i
    assert_eq!((el(c, &[1.0, 2.0]) * el(c, &[3.0, -1.0])).coeffs(), &[5.0, 5.0]);
    let h = AlgebraDim::QUATERNION;
    let (i, j, k) = (AlgebraElement::basis(h, 1), AlgebraElement::basis(h, 2), AlgebraElement::basis(h, 3));
    assert_eq!(i * j, k);
    assert_eq!(j * k, i);
    assert_eq!(k * i, j);
    assert_eq!(j * i, -k);
    assert_eq!(AlgebraElement::real(c, 2.0).inverse().unwrap().coeffs(), &[0.5, 0.0]);
    assert_eq!(AlgebraElement::basis(c, 1).inverse().unwrap().coeffs(), &[0.0, -1.0]);
}

#[test]
fn frames_for_n1_and_n2() {
    let f1 = build_lambda(AlgebraDim::REAL);
    let v: Vec<f64> = f1.vectors().iter().map(|x| x.re()).collect();
    assert_eq!(v, vec![-1.0, 1.0]);

    let f2 = build_lambda(AlgebraDim::COMPLEX);
    let r = 3f64.sqrt() / 2.0;
    let want = [[-r, -0.5], [r, -0.5], [0.0, 1.0]];
    for (got, want) in f2.vectors().iter().zip(want) {
        assert!(close(got.coeffs(), &want, EPS), "{got:?}");
    }
}

#[test]
fn span_special_tuples() {
    let d = AlgebraDim::QUATERNION;
    let f = build_lambda(d);
    let ones = span_embed(&f, &SpanCoords { v: AlgebraElement::zero(d), w: AlgebraElement::one(d) });
    assert!(ones.iter().all(|u| *u == AlgebraElement::one(d)));
    let lam = span_embed(&f, &SpanCoords { v: AlgebraElement::one(d), w: AlgebraElement::zero(d) });
    assert_eq!(lam, f.vectors());
    let back = span_coords(&f, f.vectors()).unwrap();
    assert!(back.v.distance(&AlgebraElement::one(d)) < 1e-15 && back.w.norm() < 1e-15);
    let mut off = vec![AlgebraElement::zero(d); 5];
    off[0] = AlgebraElement::one(d);
    assert!(span_coords(&f, &off).is_err());
}

/// The `n = 1` point `(√(3/8), √(3/8), 1/2, 0)` through every map.
#[test]
fn n1_point_through_the_maps() {
    let d = AlgebraDim::REAL;
    let spec = VarietySpec::standard(d, Field::Complex);
    let z = (3.0f64 / 8.0).sqrt();
    let p = PointY::with_real_z(&[z, z], AlgebraElement::real(d, 0.5), AlgebraElement::zero(d));
    assert!(eval_defining(&spec, &p).unwrap().norm() < EPS);

    // z = √2·√(3/8) = √3/2, u_k = λ_k/2
    let q = maps::y_to_x(&spec, &p).unwrap();
    let h = 3f64.sqrt() / 2.0;
    assert!(close(&q.z.iter().map(|c| c.re).collect::<Vec<_>>(), &[h, h], EPS));
    assert!(close(&q.u.iter().map(|u| u.re()).collect::<Vec<_>>(), &[-0.5, 0.5], EPS));
    assert!(eval_sphere(&spec, &q).unwrap().iter().all(|r| r.abs() < EPS));

    let img = maps::phi(&spec, &p).unwrap();
    assert_eq!((img.v, img.w, img.product_norm()), (0.5, 0.0, 0.0));
    let c = maps::psi(&img).unwrap();
    assert!(close(&c.a, &[z, z], EPS) && (c.b - 0.5).abs() < EPS);
    // c = 0, p = 1/4, q = 0 → x = 1/2, y = 0
    let back = maps::inverse_psi_phi(&spec, &c).unwrap();
    assert!(back.max_abs_diff(&p) < 1e-15);
}

#[test]
fn solve_pq_examples() {
    assert_eq!(maps::solve_pq(2.0, 1.0).unwrap(), (1.0, 1.0));
    assert_eq!(maps::solve_pq(1.0, 0.0).unwrap(), (1.0, 0.0));
    let (x, y) = maps::solve_pq(1.25, 0.5).unwrap();
    assert!((x - 1.0).abs() < EPS && (y - 0.5).abs() < EPS);
    assert!(maps::solve_pq(1.0, 1.0).is_err());
}

#[test]
fn pole_of_s_plus_maps_to_w_zero() {
    let d = AlgebraDim::OCTONION;
    let spec = VarietySpec::standard(d, Field::Complex);
    let c = CompactifiedPoint::new(vec![0.0; 9], 1.0).unwrap();
    let p = maps::inverse_psi_phi(&spec, &c).unwrap();
    assert!(p.z.iter().all(|z| z.norm() == 0.0));
    assert_eq!(p.v[0], AlgebraElement::one(d));
    assert_eq!(p.w[0].norm(), 0.0);
    let c = CompactifiedPoint::new(vec![0.0; 9], -1.0).unwrap();
    let p = maps::inverse_psi_phi(&spec, &c).unwrap();
    assert_eq!((p.v[0].norm(), p.w[0].norm()), (0.0, 1.0));
}

#[test]
fn lift_examples() {
    for d in AlgebraDim::ALL {
        let spec = VarietySpec::standard(d, Field::Complex);
        let zero = AlgebraElement::zero(d);
        let p = lift_from_vw(&spec, &zero, &zero).unwrap().unwrap();
        let want = 1.0 / ((d.get() + 1) as f64).sqrt();
        assert!(p.z.iter().all(|z| (z.re - want).abs() < EPS));
        let p = lift_from_vw(&spec, &zero, &AlgebraElement::one(d)).unwrap().unwrap();
        assert!(p.z.iter().all(|z| z.norm() == 0.0));
    }
    let d = AlgebraDim::REAL;
    let h = AlgebraElement::real(d, 0.5f64.sqrt());
    assert!(lift_from_vw(&VarietySpec::standard(d, Field::Complex), &h, &h).unwrap().is_none());
}

#[test]
fn singular_point_of_a_non_hyperbolic_frame() {
    let d = AlgebraDim::COMPLEX;
    let frame = LambdaFrame::new(d, vec![AlgebraElement::one(d), -AlgebraElement::one(d)]).unwrap();
    let spec = VarietySpec::general(frame, 1, Field::Complex).unwrap();
    let h = 0.5f64.sqrt();
    let p = PointY::with_real_z(&[h, h], AlgebraElement::zero(d), AlgebraElement::zero(d));
    let rep = is_regular(&spec, &p, 1e-10).unwrap();
    assert!(!rep.regular);
    assert_eq!(rep.rank, 2);
}

#[test]
fn hull_examples() {
    let d = AlgebraDim::COMPLEX;
    let one = AlgebraElement::one(d);
    assert!(hull_membership(&[one, AlgebraElement::zero(d)], 1).contains_origin);
    assert!(!hull_membership(build_lambda(d).vectors(), 2).contains_origin);
    assert!(hull_membership(build_lambda(d).vectors(), 3).contains_origin);
    let dec = hull_membership(&[one, -one], 2);
    assert!(dec.contains_origin);
    match dec.certificate {
        divquad::variety::HullCertificate::Contains { coefficients, .. } => {
            assert!(close(&coefficients, &[0.5, 0.5], 1e-12))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn topology_examples() {
    let y2 = VarietySpec::standard(AlgebraDim::COMPLEX, Field::Complex);
    assert_eq!(fixed_set_prediction(&y2, 1).unwrap(), DiffeotypeDescriptor::product(4, 1));
    assert_eq!(fixed_set_prediction(&y2, 3).unwrap(), DiffeotypeDescriptor::product(0, 1));
    let v = freeness_verdict(&y2).unwrap();
    assert_eq!((v.verdict, v.manifold_betti_sum, v.fixed_set_betti_sum), (Freeness::TorsionFreeNotFree, 8, 4));
    let y1 = VarietySpec::standard(AlgebraDim::REAL, Field::Complex);
    assert_eq!(freeness_verdict(&y1).unwrap().verdict, Freeness::Free);

    let y4 = VarietySpec::standard(AlgebraDim::QUATERNION, Field::Complex);
    let d = predicted_type(&y4).unwrap().descriptor().unwrap().clone();
    assert_eq!(d.dimension, 13);
    assert_eq!(&d.poincare().betti[5..9], &[5, 10, 10, 5]);
}
