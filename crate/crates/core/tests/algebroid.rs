use posthopf_core::sample::{random_tuple, rng, CoeffKind};
use posthopf_core::{Algebroid, AlgebroidElement, CoeffPoly, TensorElement};
use proptest::prelude::*;

fn element(seed: u64, grade: usize) -> AlgebroidElement {
    random_tuple(&mut rng(seed), 1, grade, CoeffKind::Aromatic).remove(0)
}

fn el(s: &str) -> AlgebroidElement {
    AlgebroidElement::parse(s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dump_and_display_are_canonical(seed in any::<u64>()) {
        let x = element(seed, 4);
        prop_assert_eq!(AlgebroidElement::parse(&x.dump()).unwrap(), x.clone());
        prop_assert_eq!(AlgebroidElement::parse(&x.to_string()).unwrap(), x.clone());
        let again = AlgebroidElement::parse(&x.dump()).unwrap();
        prop_assert_eq!(again.dump(), x.dump());
    }

    #[test]
    fn coproduct_is_coassociative_and_counital(seed in any::<u64>()) {
        let h = Algebroid::default();
        let x = element(seed, 4);
        let d = h.coproduct(&x);
        let mut lhs = TensorElement::zero(3);
        let mut rhs = TensorElement::zero(3);
        for (ws, c) in d.terms() {
            for (a, ca) in h.coproduct(&AlgebroidElement::word(ws[0].clone())).terms() {
                lhs.add_term(vec![a[0].clone(), a[1].clone(), ws[1].clone()], c * ca);
            }
            for (b, cb) in h.coproduct(&AlgebroidElement::word(ws[1].clone())).terms() {
                rhs.add_term(vec![ws[0].clone(), b[0].clone(), b[1].clone()], c * cb);
            }
        }
        prop_assert_eq!(lhs, rhs);
        let mut counit_left = AlgebroidElement::zero();
        for (ws, c) in d.terms() {
            let eps = AlgebroidElement::word(ws[0].clone()).counit();
            counit_left.add_term(ws[1].clone(), c * &eps);
        }
        prop_assert_eq!(counit_left, x);
    }

    #[test]
    fn triangle_is_bilinear_and_left_linear(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let h = Algebroid::default();
        let (x, y, z) = (element(s1, 2), element(s2, 2), element(s3, 2));
        prop_assert_eq!(h.triangle(&x, &(&y + &z)), &h.triangle(&x, &y) + &h.triangle(&x, &z));
        prop_assert_eq!(h.triangle(&(&x + &y), &z), &h.triangle(&x, &z) + &h.triangle(&y, &z));
        let f = CoeffPoly::var("k");
        prop_assert_eq!(h.triangle(&x.mul_coeff(&f), &y), h.triangle(&x, &y).mul_coeff(&f));
    }

    #[test]
    fn theta_is_an_involution(seed in any::<u64>()) {
        let h = Algebroid::default();
        let x = element(seed, 3);
        prop_assert_eq!(h.theta(&h.theta(&x)), x);
    }
}

#[test]
fn worked_values() {
    let h = Algebroid::default();
    assert_eq!(h.triangle(&el("o o"), &el("o")), el("[oo]"));
    assert_eq!(h.triangle(&el("o"), &el("o")), el("[o]"));
    assert_eq!(h.gl_product(&el("o"), &el("o")), el("o o ; [o]"));
    assert_eq!(h.theta(&el("g | o")), el("-g | o ; -g^(o) | 1"));
    let r = h.braid_r(&h.tensor_bimod(&el("o"), &el("o")));
    assert_eq!(r.dump(), "-1 | 1 | [o]\n1 | o | o\n1 | [o] | 1\n");
}

#[test]
fn grade_bound_is_reported() {
    let h = Algebroid::default().with_max_grade(3);
    let big = el("o o");
    assert!(h.try_triangle(&big, &big).is_err());
    assert!(h.try_gl_product(&el("o"), &el("o")).is_ok());
}
