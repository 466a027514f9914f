use crate::algebroid::{Algebroid, AlgebroidElement, TensorElement};
use crate::coeffs::CoeffPoly;
use crate::sample::CoeffKind;
use crate::trees::{enumerate_forests, Forest};

use super::{
    case_tuples, coproduct_of_triangle, expect_eq, run_cases, sum, sweedler2, CheckReport, Suite,
    SuiteConfig,
};

/// Weak post-Hopf algebroid axioms, Grossman–Larson bialgebroid laws, the
/// smash-product formula and the module-algebra laws.
pub struct AxiomSuite;

impl Suite for AxiomSuite {
    fn name(&self) -> &'static str {
        "axioms"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckReport> {
        let h = Algebroid::default();
        let g = cfg.max_grade;
        let singles = case_tuples(cfg, 1, CoeffKind::Aromatic, 1);
        let pairs = case_tuples(cfg, 2, CoeffKind::Aromatic, 2);
        let triples = case_tuples(cfg, 3, CoeffKind::Aromatic, 3);
        let one = AlgebroidElement::one();
        let mut out = Vec::new();

        out.push(run_cases("post-had-1", g, &pairs, |c| {
            coproduct_of_triangle(&h, &c[0], &c[1])
        }));
        out.push(run_cases("post-had-1'", g, &singles, |c| {
            let x = &c[0];
            expect_eq(&h.triangle(x, &one), &AlgebroidElement::iota(x.counit()), &[x])
        }));
        out.push(run_cases("post-had-1''", g, &singles, |c| {
            let x = &c[0];
            expect_eq(&h.triangle(&one, x), x, &[x])
        }));
        out.push(run_cases("post-had-2'", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = AlgebroidElement::iota(h.triangle(x, y).counit());
            let rhs = h.triangle(x, &AlgebroidElement::iota(y.counit()));
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("post-had-2", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let f = coefficient_probe(y);
            let lhs = h.triangle(&x.mul_coeff(&f), y);
            let rhs = h.triangle(x, y).mul_coeff(&f);
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("post-had-3", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let lhs = h.triangle(x, &y.concat(z));
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(x1, x2)| h.triangle(x1, y).concat(&h.triangle(x2, z))));
            expect_eq(&lhs, &rhs, &[x, y, z])
        }));
        out.push(run_cases("post-had-4", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let lhs = h.triangle(x, &h.triangle(y, z));
            let inner = sum(sweedler2(x).iter().map(|(x1, x2)| x1.concat(&h.triangle(x2, y))));
            let rhs = h.triangle(&inner, z);
            expect_eq(&lhs, &rhs, &[x, y, z])
        }));
        out.push(run_cases("post-had-5'", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let iota_f = AlgebroidElement::iota(coefficient_probe(y));
            let lhs = h.triangle(x, &iota_f);
            let rhs = AlgebroidElement::iota(lhs.counit());
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("post-had-5", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let f = coefficient_probe(y);
            let lhs = h.triangle(&AlgebroidElement::iota(f.clone()), x);
            expect_eq(&lhs, &x.mul_coeff(&f), &[x, y])
        }));
        out.push(run_cases("triangle-routes", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            expect_eq(&h.triangle(x, y), &h.triangle_via_action(x, y), &[x, y])
        }));
        out.push(run_cases("gl-assoc", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let lhs = h.gl_product(&h.gl_product(x, y), z);
            let rhs = h.gl_product(x, &h.gl_product(y, z));
            expect_eq(&lhs, &rhs, &[x, y, z])
        }));
        out.push(run_cases("gl-unit", g, &singles, |c| {
            let x = &c[0];
            if h.gl_product(&one, x) != *x {
                return Some(super::witness(&[x]));
            }
            expect_eq(&h.gl_product(x, &one), x, &[x])
        }));
        out.push(run_cases("gl-coproduct", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = h.coproduct(&h.gl_product(x, y));
            let mut rhs = TensorElement::zero(2);
            for (x1, x2) in sweedler2(x) {
                for (y1, y2) in sweedler2(y) {
                    rhs.add_assign_ref(&h.tensor_r(&h.gl_product(&x1, &y1), &h.gl_product(&x2, &y2)));
                }
            }
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("gl-counit", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = h.gl_product(x, &AlgebroidElement::iota(y.counit())).counit();
            if lhs != h.gl_product(x, y).counit() {
                return Some(super::witness(&[x, y]));
            }
            let left_unit = sum(sweedler2(x)
                .iter()
                .map(|(x1, x2)| h.gl_product(&AlgebroidElement::iota(x1.counit()), x2)));
            expect_eq(&left_unit, x, &[x, y])
        }));
        out.push(run_cases("concat-counit", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = x.concat(y).counit();
            let rhs = x.concat(&AlgebroidElement::iota(y.counit())).counit();
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        let pure_pairs: Vec<_> = pairs
            .iter()
            .filter(|c| c.iter().all(|e| e.num_terms() == 1))
            .cloned()
            .collect();
        out.push(run_cases("smash-product", g, &pure_pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            expect_eq(&h.gl_product(x, y), &h.gl_product_via_smash(x, y), &[x, y])
        }));
        out.push(run_cases("module-algebra", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let f = coefficient_probe(z);
            let laws = [
                h.triangle(&h.gl_product(x, y), z) == h.triangle(x, &h.triangle(y, z)),
                h.triangle(&one, z) == *z,
                h.triangle(&x.mul_coeff(&f), z) == h.triangle(x, z).mul_coeff(&f),
                h.triangle(x, &y.concat(z))
                    == sum(sweedler2(x).iter().map(|(a, b)| h.triangle(a, y).concat(&h.triangle(b, z)))),
                h.triangle(x, &one) == AlgebroidElement::iota(x.counit()),
            ];
            if laws.iter().all(|ok| *ok) {
                None
            } else {
                Some(super::witness(&[x, y, z]))
            }
        }));
        let trees: Vec<Vec<AlgebroidElement>> = letter_pairs(g.max(2));
        out.push(run_cases("primitive-closure", g, &trees, |c| {
            let (x, y) = (&c[0], &c[1]);
            let p = h.triangle(x, y);
            let lhs = h.coproduct(&p);
            let rhs = &h.tensor_r(&p, &one) + &h.tensor_r(&one, &p);
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("anchor-bracket", g, &trees, |c| {
            let (x, y) = (&c[0], &c[1]);
            let f = CoeffPoly::var("g");
            let bracket = &(&(&h.triangle(x, y) - &h.triangle(y, x)) + &x.concat(y)) - &y.concat(x);
            let lhs = h.module_action(&bracket, &f);
            let rhs = &h.module_action(x, &h.module_action(y, &f)) - &h.module_action(y, &h.module_action(x, &f));
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("lu-module", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let (f, k) = (CoeffPoly::var("g"), coefficient_probe(y));
            let lhs = h.lu_action(&h.gl_product(x, y), &f);
            if lhs != h.lu_action(x, &h.lu_action(y, &f)) {
                return Some(super::witness(&[x, y]));
            }
            if h.lu_action(x, &f) != h.module_action(x, &f) {
                return Some(super::witness(&[x, y]));
            }
            let product = h.lu_action(x, &(&f * &k));
            let mut expanded = CoeffPoly::zero();
            for (x1, x2) in sweedler2(x) {
                expanded.add_assign_ref(&(&h.lu_action(&x1, &f) * &h.lu_action(&x2, &k)));
            }
            if product != expanded {
                return Some(super::witness(&[x, y]));
            }
            None
        }));
        out
    }
}

/// A nonconstant coefficient derived from a case, so checks quantified over
/// `f ∈ R` see varied inputs without extra randomness.
fn coefficient_probe(y: &AlgebroidElement) -> CoeffPoly {
    let from_case = y.terms().map(|(_, f)| f.clone()).next().unwrap_or_else(CoeffPoly::one);
    &from_case + &CoeffPoly::var("h")
}

/// All pairs of single trees with total grade at most `max_total`.
fn letter_pairs(max_total: usize) -> Vec<Vec<AlgebroidElement>> {
    let forests = enumerate_forests(max_total.min(crate::trees::DEFAULT_ENUMERATION_BOUND))
        .expect("within the default bound");
    let trees: Vec<&Forest> = forests.iter().filter(|w| w.len() == 1).collect();
    let mut out = Vec::new();
    for a in &trees {
        for b in &trees {
            if a.grade() + b.grade() <= max_total {
                out.push(vec![
                    AlgebroidElement::word((*a).clone()),
                    AlgebroidElement::word((*b).clone()),
                ]);
            }
        }
    }
    out
}
