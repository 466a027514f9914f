use std::sync::Arc;

use posthopf_geomint::experiment::{series_errors, SeriesExp};
use posthopf_geomint::func::PolyFunction;
use posthopf_geomint::group::{Se2, So3};
use posthopf_geomint::stepper::{reference_flow, reference_point, step, translate, ReferenceStepper};
use posthopf_geomint::*;

fn so3_point(seed: u64) -> Mat {
    use rand::SeedableRng;
    So3::default().random_point(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn constant_fields_flow_along_one_parameter_subgroups() {
    let g = Se2::default();
    let f = build_field(&g, "constant", DerivMode::Analytic, 3).unwrap();
    let q = Mat::identity();
    let v = f.at(&q);
    let exact = (g.frame().hat(&v) * 0.7).exp();
    let end = reference_point(&f, &q, 0.7, 1e-12).unwrap();
    assert!((end - exact).norm() < 1e-12);
    let le = step(stepper_by_name("lie-euler", 1e-12).unwrap().as_ref(), &f, &q, 0.7).unwrap();
    assert!((le - exact).norm() < 1e-14);
}

#[test]
fn reference_flow_is_self_consistent_under_tolerance_halving() {
    let f = build_field(&So3::default(), "divfree", DerivMode::Analytic, 0).unwrap();
    let p = so3_point(1);
    for tol in [1e-9, 1e-10, 1e-11] {
        let a = reference_flow(&f, &p, 0.1, tol).unwrap().increment;
        let b = reference_flow(&f, &p, 0.1, tol / 2.0).unwrap().increment;
        assert!((a - b).amax() <= 10.0 * tol);
    }
}

#[test]
fn reference_flow_stays_on_the_group_and_composes() {
    let f = build_field(&So3::default(), "divfree", DerivMode::Analytic, 0).unwrap();
    let p = so3_point(2);
    let q = reference_point(&f, &p, 0.8, 1e-12).unwrap();
    assert!((q.transpose() * q - Mat::identity()).norm() < 1e-12);
    let half = reference_point(&f, &p, 0.4, 1e-12).unwrap();
    let twice = reference_point(&f, &half, 0.4, 1e-12).unwrap();
    assert!((twice - q).norm() < 1e-10);
}

#[test]
fn reference_flow_preserves_volume_of_a_divergence_free_field() {
    let f = build_field(&So3::default(), "divfree", DerivMode::Analytic, 0).unwrap();
    let reference = ReferenceStepper { tol: 1e-12 };
    for t in [1e-3, 3e-3, 1e-2] {
        let v = step_volume(&reference, &f, &so3_point(3), t).unwrap();
        assert!(v.abs() <= 1e-8, "t = {t}: {v}");
    }
}

#[test]
fn volume_change_of_a_general_field_matches_its_divergence() {
    // log det Dψ_t = ∫ Div F along the orbit ≈ t·Div F(p) for small t
    let f = build_field(&Se2::default(), "affine", DerivMode::Analytic, 4).unwrap();
    let p = Mat::identity();
    let reference = ReferenceStepper { tol: 1e-12 };
    let t = 1e-4;
    let v = step_volume(&reference, &f, &p, t).unwrap();
    let div = posthopf_geomint::eval::divergence(&f, &p).unwrap();
    assert!((v / t - div).abs() < 1e-3 * div.abs().max(1.0), "{v} vs {}", t * div);
}

#[test]
fn truncated_exponentials_converge_at_order_four() {
    let cfg = ExperimentConfig::default();
    let frame = Arc::new(So3::default().frame().clone());
    let phi = &Poly9::entry(0, 0) + &(&Poly9::entry(0, 1) * &Poly9::entry(1, 2));
    let phi: Arc<dyn ScalarFunction> = Arc::new(PolyFunction::new(phi, frame));
    for kind in [SeriesExp::GrossmanLarson, SeriesExp::Concatenation] {
        let errs = series_errors(kind, &cfg, 3, phi.clone()).unwrap();
        let (slope, _) = slope_estimate(&errs).unwrap();
        assert!((slope - 4.0).abs() <= 0.2, "{kind:?}: {slope}");
    }
}

#[test]
fn translate_is_right_multiplication_by_the_exponential() {
    let g = So3::default();
    let p = so3_point(5);
    let v = nalgebra::DVector::from_vec(vec![0.3, -0.1, 0.2]);
    assert!((translate(g.frame(), &p, &v) - p * g.frame().hat(&v).exp()).norm() < 1e-14);
}
