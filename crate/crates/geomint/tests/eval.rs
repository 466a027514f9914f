
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use posthopf_core::trees::{left_graft, trees_of_size};
use posthopf_core::PlanarTree;
use posthopf_geomint::eval::{connection, divergence, eval_aroma, eval_tree, torsion_bracket, tree_polys};
use posthopf_geomint::field::{DivFreeRecipe, FieldRecipe};
use posthopf_geomint::func::PolyFunction;
use posthopf_geomint::group::So3;
use posthopf_geomint::*;

fn so3_field(mode: DerivMode) -> FrameVectorField {
    build_field(&So3::default(), "divfree", mode, 0).unwrap()
}

fn tree_field(tau: &PlanarTree, f: &FrameVectorField, polys: &[Poly9]) -> FrameVectorField {
    let p = tree_polys(tau, polys, f.frame()).unwrap();
    FrameVectorField::from_polys(f.frame_arc(), p, DerivMode::Analytic).unwrap()
}

fn points(n: usize) -> Vec<Mat> {
    let g = So3::default();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    (0..n).map(|_| g.random_point(&mut rng)).collect()
}

fn rel(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn eval_is_a_homomorphism_from_grafting_to_the_connection() {
    let f = so3_field(DerivMode::Analytic);
    let polys = DivFreeRecipe.polys(&So3::default(), 0).unwrap();
    let trees: Vec<PlanarTree> = (1..=3).flat_map(trees_of_size).collect();
    let pts = points(10);
    let mut pairs = 0;
    for tau in &trees {
        for sigma in &trees {
            if tau.vertex_count() + sigma.vertex_count() > 4 {
                continue;
            }
            pairs += 1;
            let (x, y) = (tree_field(tau, &f, &polys), tree_field(sigma, &f, &polys));
            for p in &pts {
                let mut lhs = DVector::zeros(3);
                for (t, m) in left_graft(tau, sigma) {
                    lhs += eval_tree(&t, &f, p).unwrap() * m as f64;
                }
                let rhs = connection(&x, &y, p).unwrap();
                assert!(rel(&lhs, &rhs) <= 1e-8, "{tau} ↷ {sigma}: {lhs} vs {rhs}");
            }
        }
    }
    assert_eq!(pairs, 8);
}

#[test]
fn symbolic_and_frozen_tree_evaluation_agree() {
    let f = so3_field(DerivMode::Analytic);
    let polys = DivFreeRecipe.polys(&So3::default(), 0).unwrap();
    for tau in (1..=4).flat_map(trees_of_size) {
        let sym = tree_polys(&tau, &polys, f.frame()).unwrap();
        for p in points(3) {
            let frozen = eval_tree(&tau, &f, &p).unwrap();
            let exact = DVector::from_iterator(3, sym.iter().map(|q| q.eval(&p)));
            assert!((frozen - exact).norm() < 1e-12, "{tau}");
        }
    }
}

#[test]
fn finite_difference_mode_tracks_analytic_mode() {
    let exact = so3_field(DerivMode::Analytic);
    let fd = so3_field(DerivMode::FiniteDifference);
    for tau in (1..=3).flat_map(trees_of_size) {
        for p in points(2) {
            let a = eval_tree(&tau, &exact, &p).unwrap();
            let b = eval_tree(&tau, &fd, &p).unwrap();
            assert!((a - b).norm() < 1e-6, "{tau}");
        }
    }
}

/// `⟦X,Y⟧_J[φ] = X[Y[φ]] − Y[X[φ]]` by nested central differences along the
/// flows of the frozen vectors.
fn jacobi_lie_on(x: &FrameVectorField, y: &FrameVectorField, phi: &Poly9, p: &Mat) -> f64 {
    let frame = x.frame();
    let along = |v: &FrameVectorField, g: &dyn Fn(&Mat) -> f64, q: &Mat| {
        let h = 1e-3;
        let at = |s: f64| {
            let step = frame.hat(&(v.at(q) * s));
            g(&(q + q * frame.expm1(&step)))
        };
        (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h)
    };
    let base = |q: &Mat| phi.eval(q);
    let y_phi = |q: &Mat| along(y, &base, q);
    let x_phi = |q: &Mat| along(x, &base, q);
    along(x, &y_phi, p) - along(y, &x_phi, p)
}

#[test]
fn jacobi_lie_bracket_decomposes_into_torsion_and_connection() {
    let f = so3_field(DerivMode::Analytic);
    let polys = DivFreeRecipe.polys(&So3::default(), 0).unwrap();
    let x = tree_field(&PlanarTree::leaf(), &f, &polys);
    let y = tree_field(&PlanarTree::parse("[o]").unwrap(), &f, &polys);
    let phi = &(&Poly9::entry(0, 0) * &Poly9::entry(1, 2)) + &Poly9::entry(2, 1);
    let phi_fn = PolyFunction::new(phi.clone(), f.frame_arc());
    for p in points(4) {
        let v = torsion_bracket(f.frame(), &x.at(&p), &y.at(&p)) + connection(&x, &y, &p).unwrap()
            - connection(&y, &x, &p).unwrap();
        let rhs: f64 = (0..3)
            .map(|k| v[k] * phi_fn.derivative(&[k], &p).unwrap())
            .sum();
        let lhs = jacobi_lie_on(&x, &y, &phi, &p);
        assert!((lhs - rhs).abs() < 1e-5, "{lhs} vs {rhs}");
    }
}

#[test]
fn aroma_is_the_divergence_of_f_on_f() {
    let f = so3_field(DerivMode::Analytic);
    let polys = DivFreeRecipe.polys(&So3::default(), 0).unwrap();
    let ff = tree_field(&PlanarTree::parse("[o]").unwrap(), &f, &polys);
    for p in points(5) {
        assert!(divergence(&f, &p).unwrap().abs() < 1e-13);
        let a = eval_aroma(&f, &p).unwrap();
        assert!((a - divergence(&ff, &p).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn capacity_and_mode_errors() {
    let f = so3_field(DerivMode::Analytic);
    let big = PlanarTree::parse("[[[[[[[[o]]]]]]]]").unwrap();
    assert!(matches!(
        eval_tree(&big, &f, &Mat::identity()),
        Err(GeomError::Capacity { .. })
    ));
    assert!("symbolic".parse::<DerivMode>().is_err());
    let fd = so3_field(DerivMode::FiniteDifference);
    let deep = PlanarTree::parse("[ooooo]").unwrap();
    assert!(matches!(eval_tree(&deep, &fd, &Mat::identity()), Err(GeomError::Config(_))));
}
