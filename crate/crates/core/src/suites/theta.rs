use crate::algebroid::{Algebroid, AlgebroidElement, TensorElement};
use crate::sample::CoeffKind;

use super::{case_tuples, expect_eq, run_cases, sum, sweedler2, CheckReport, Suite, SuiteConfig};

/// Identities of the Grossman–Larson antipode θ.
pub struct ThetaSuite;

impl Suite for ThetaSuite {
    fn name(&self) -> &'static str {
        "theta"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckReport> {
        let h = Algebroid::default();
        let g = cfg.max_grade;
        let singles = case_tuples(cfg, 1, CoeffKind::Aromatic, 11);
        let pairs = case_tuples(cfg, 2, CoeffKind::Aromatic, 12);
        let iota = AlgebroidElement::iota;
        let mut out = Vec::new();

        out.push(run_cases("post-con", g, &singles, |c| {
            let x = &c[0];
            let lhs = sum(sweedler2(x).iter().map(|(a, b)| h.gl_product(a, &h.theta(b))));
            expect_eq(&lhs, &iota(x.counit()), &[x])
        }));
        out.push(run_cases("post-con'", g, &singles, |c| {
            let x = &c[0];
            let lhs = sum(sweedler2(x).iter().map(|(a, b)| h.gl_product(&h.theta(a), b)));
            expect_eq(&lhs, &iota(h.theta(x).counit()), &[x])
        }));
        out.push(run_cases("post-anti-coalg", g, &singles, |c| {
            let x = &c[0];
            let lhs = h.coproduct(&h.theta(x));
            let mut rhs = TensorElement::zero(2);
            for (a, b) in sweedler2(x) {
                rhs.add_assign_ref(&h.tensor_r(&h.theta(&a), &h.theta(&b)));
            }
            expect_eq(&lhs, &rhs, &[x])
        }));
        out.push(run_cases("anti-automorphism", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = h.theta(&h.gl_product(x, y));
            let rhs = h.gl_product(&h.theta(y), &h.theta(x));
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("theta-iota", g, &singles, |c| {
            let f = c[0].terms().map(|(_, f)| f.clone()).next().unwrap_or_default();
            expect_eq(&h.theta(&iota(f.clone())), &iota(f), &[&c[0]])
        }));
        out.push(run_cases("theta-involution", g, &singles, |c| {
            let x = &c[0];
            expect_eq(&h.theta(&h.theta(x)), x, &[x])
        }));
        out.push(run_cases("post-anti-coef", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let f = y.terms().map(|(_, f)| f.clone()).next().unwrap_or_default();
            let lhs = h.theta(&x.mul_coeff(&f));
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(&h.theta(a), &iota(f.clone())).concat(&h.theta(b))));
            expect_eq(&lhs, &rhs, &[x, y])
        }));
        out.push(run_cases("anti-theta", g, &singles, |c| {
            let x = &c[0];
            let rhs = sum(sweedler2(x).iter().map(|(a, b)| h.triangle(a, &h.theta(b))));
            expect_eq(&x.antipode_concat(), &rhs, &[x])
        }));
        out.push(run_cases("anti-theta'", g, &singles, |c| {
            let x = &c[0];
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(&h.theta(a), &b.antipode_concat())));
            expect_eq(&h.theta(x), &rhs, &[x])
        }));
        out.push(run_cases("anti-theta''", g, &singles, |c| {
            let x = &c[0];
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(&h.theta(a), &iota(b.counit()))));
            expect_eq(&iota(h.theta(x).counit()), &rhs, &[x])
        }));
        out.push(run_cases("anti-theta''''", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.gl_product(a, &h.triangle(&h.theta(b), y))));
            expect_eq(&x.concat(y), &rhs, &[x, y])
        }));
        out.push(run_cases("anti-theta'''", g, &singles, |c| {
            let x = &c[0];
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.gl_product(a, &iota(h.theta(b).counit()))));
            expect_eq(x, &rhs, &[x])
        }));
        out
    }
}
