use std::sync::Arc;

use crate::algebroid::{Algebroid, AlgebroidElement};
use crate::anchor::ZeroAnchor;
use crate::sample::CoeffKind;

use super::{
    case_tuples, coproduct_of_triangle, expect_eq, run_cases, sum, sweedler2, CheckReport, Suite,
    SuiteConfig,
};

/// With every derivation zero the algebroid is a cocommutative post-Hopf
/// algebra; this suite checks the post-Hopf algebra identities there.
pub struct DegenerateSuite;

impl Suite for DegenerateSuite {
    fn name(&self) -> &'static str {
        "degenerate"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckReport> {
        let h = Algebroid::new(Arc::new(ZeroAnchor));
        let g = cfg.max_grade;
        let singles = case_tuples(cfg, 1, CoeffKind::Scalar, 21);
        let pairs = case_tuples(cfg, 2, CoeffKind::Scalar, 22);
        let triples = case_tuples(cfg, 3, CoeffKind::Scalar, 23);
        let one = AlgebroidElement::one();
        let mut out = Vec::new();

        out.push(run_cases("post-1", g, &singles, |c| {
            let x = &c[0];
            expect_eq(&h.triangle(x, &one), &one.mul_coeff(&x.counit()), &[x])
        }));
        out.push(run_cases("post-3", g, &singles, |c| {
            let x = &c[0];
            expect_eq(&h.triangle(&one, x), x, &[x])
        }));
        out.push(run_cases("post-2", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(a, y).concat(&h.triangle(b, z))));
            expect_eq(&h.triangle(x, &y.concat(z)), &rhs, &[x, y, z])
        }));
        out.push(run_cases("post-4", g, &triples, |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let inner = sum(sweedler2(x).iter().map(|(a, b)| a.concat(&h.triangle(b, y))));
            expect_eq(&h.triangle(x, &h.triangle(y, z)), &h.triangle(&inner, z), &[x, y, z])
        }));
        out.push(run_cases("post-5", g, &pairs, |c| {
            let (x, y) = (&c[0], &c[1]);
            let lhs = h.triangle(x, y).antipode_concat();
            expect_eq(&lhs, &h.triangle(x, &y.antipode_concat()), &[x, y])
        }));
        out.push(run_cases("coalgebra-hom", g, &pairs, |c| {
            coproduct_of_triangle(&h, &c[0], &c[1])
        }));
        out.push(run_cases("theta-antipode", g, &singles, |c| {
            let x = &c[0];
            let eps = one.mul_coeff(&x.counit());
            let right = sum(sweedler2(x).iter().map(|(a, b)| h.gl_product(a, &h.theta(b))));
            let left = sum(sweedler2(x).iter().map(|(a, b)| h.gl_product(&h.theta(a), b)));
            if right != eps {
                return Some(super::witness(&[x]));
            }
            expect_eq(&left, &eps, &[x])
        }));
        out.push(run_cases("beta-inverse", g, &pairs, |c| {
            let (x, z) = (&c[0], &c[1]);
            let eps_z = z.mul_coeff(&x.counit());
            let alpha_beta = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(a, &h.triangle(&h.theta(b), z))));
            let beta_alpha = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(&h.theta(a), &h.triangle(b, z))));
            if alpha_beta != eps_z {
                return Some(super::witness(&[x, z]));
            }
            expect_eq(&beta_alpha, &eps_z, &[x, z])
        }));
        out.push(run_cases("theta-formula", g, &singles, |c| {
            // S▷(x) = S▷(x₁) ▷ S(x₂)
            let x = &c[0];
            let rhs = sum(sweedler2(x)
                .iter()
                .map(|(a, b)| h.triangle(&h.theta(a), &b.antipode_concat())));
            expect_eq(&h.theta(x), &rhs, &[x])
        }));
        out
    }
}
