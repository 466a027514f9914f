use posthopf_core::coeffs::{ratio, scalar};
use posthopf_core::trees::trees_of_size;
use posthopf_core::{derive, AromaGenerator, CoeffPoly, Monomial, PlanarTree};
use proptest::prelude::*;

fn generators() -> Vec<AromaGenerator> {
    let o = PlanarTree::leaf();
    let g = AromaGenerator::new("g");
    vec![
        g.clone(),
        AromaGenerator::new("h"),
        g.apply(&o),
        AromaGenerator::div_df(),
    ]
}

fn poly() -> impl Strategy<Value = CoeffPoly> {
    prop::collection::vec(
        (prop::collection::vec((0usize..4, 1u32..=2), 0..3), -4i64..=4, 1i64..=3),
        0..4,
    )
    .prop_map(|terms| {
        let gens = generators();
        let mut p = CoeffPoly::zero();
        for (factors, n, d) in terms {
            let m = Monomial::from_factors(factors.into_iter().map(|(i, k)| (gens[i].clone(), k)));
            p.add_term(m, ratio(n, d));
        }
        p
    })
}

fn tree() -> impl Strategy<Value = PlanarTree> {
    (1usize..=3, any::<usize>()).prop_map(|(n, i)| {
        let all = trees_of_size(n);
        all[i % all.len()].clone()
    })
}

proptest! {
    #[test]
    fn commutative_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &CoeffPoly::one(), a);
    }

    #[test]
    fn derivation_laws(t in tree(), a in poly(), b in poly()) {
        prop_assert_eq!(derive(&t, &(&a + &b)), &derive(&t, &a) + &derive(&t, &b));
        prop_assert_eq!(
            derive(&t, &(&a * &b)),
            &(&derive(&t, &a) * &b) + &(&a * &derive(&t, &b))
        );
        prop_assert!(derive(&t, &CoeffPoly::constant(ratio(3, 7))).is_zero());
    }

    #[test]
    fn derivation_raises_degree_by_tree_size(t in tree(), a in poly()) {
        for (m, _) in derive(&t, &a).terms() {
            let d = m.degree();
            prop_assert!(a.terms().any(|(n, _)| n.degree() + t.vertex_count() == d));
        }
    }

    #[test]
    fn display_round_trips(a in poly()) {
        prop_assert_eq!(CoeffPoly::parse(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn printed_forms() {
    let g = CoeffPoly::var("g");
    let dg = derive(&PlanarTree::leaf(), &g);
    assert_eq!(dg.to_string(), "g^(o)");
    let p = &(&g * &g).scale(&ratio(3, 2)) - &CoeffPoly::integer(1);
    assert_eq!(p.to_string(), "-1 + 3/2*g^2");
    assert_eq!(CoeffPoly::zero().to_string(), "0");
    assert_eq!(CoeffPoly::parse("a2").unwrap().degree(), 2);
    assert_eq!(CoeffPoly::constant(scalar(5)).as_constant(), Some(scalar(5)));
}

#[test]
fn parse_errors() {
    for bad in ["", "1 +", "g^(", "g^(x)", "3/0", "*g"] {
        assert!(CoeffPoly::parse(bad).is_err(), "{bad:?}");
    }
}
