//! The braiding operator `r(x ⊠ y) = x₁▷y₁ ⊠ θ(x₂▷y₂) *▷ x₃ *▷ y₃` on the
//! Grossman–Larson Hopf algebroid, and a verifier of the braiding axioms.
//!
//! Tensors here are bimodule tensors `⊠` in the normal form produced by
//! [`Algebroid::tensor_bimod`]: a coefficient in front of coefficient-free
//! words. On that form `r` only ever sees coefficient-free words.

use std::sync::Arc;

use crate::algebroid::{unshuffle, unshuffle3, Algebroid, AlgebroidElement, Join, TensorElement, WordCombo};
use crate::coeffs::CoeffPoly;
use crate::error::Result;
use crate::sample::CoeffKind;
use crate::suites::{case_tuples, expect_eq, run_cases, CheckReport, Suite, SuiteConfig};
use crate::trees::Forest;

pub type BraidReport = CheckReport;

fn combo_element(c: &WordCombo) -> AlgebroidElement {
    AlgebroidElement::from_combo(c)
}

impl Algebroid {
    /// `θ` on a coefficient-free combination.
    fn theta_combo(&self, c: &WordCombo) -> WordCombo {
        let mut out = WordCombo::new();
        for (w, k) in c {
            for (v, m) in self.gl_antipode_word(w).iter() {
                crate::algebroid::combo_add(&mut out, v.clone(), k * m);
            }
        }
        out
    }

    fn gl_combo(&self, a: &WordCombo, b: &WordCombo) -> WordCombo {
        let mut out = WordCombo::new();
        for (u, k) in a {
            for (v, m) in b {
                for (w, n) in self.gl_words(u, v).iter() {
                    crate::algebroid::combo_add(&mut out, w.clone(), k * m * n);
                }
            }
        }
        out
    }

    /// `r(a ⊠ b)` for coefficient-free words; the result is coefficient-free.
    pub fn braid_words(&self, a: &Forest, b: &Forest) -> Arc<TensorElement> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.braid_words.get(&key) {
            return hit.clone();
        }
        let mut out = TensorElement::zero(2);
        for [a1, a2, a3] in unshuffle3(a) {
            for [b1, b2, b3] in unshuffle3(b) {
                let left = self.word_on_word(&a1, &b1);
                if left.is_empty() {
                    continue;
                }
                let mid = self.theta_combo(&self.word_on_word(&a2, &b2));
                let single = |w: &Forest| -> WordCombo { [(w.clone(), num_traits::One::one())].into() };
                let right = self.gl_combo(&self.gl_combo(&mid, &single(&a3)), &single(&b3));
                for (u, k) in left.iter() {
                    for (v, m) in &right {
                        out.add_term(vec![u.clone(), v.clone()], CoeffPoly::constant(k * m));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.braid_words.insert(key, out.clone());
        out
    }

    /// `r` on a normalised bimodule tensor.
    pub fn braid_r(&self, t: &TensorElement) -> TensorElement {
        assert_eq!(t.arity(), 2, "braiding acts on two-fold tensors");
        self.map_tensor(t, |w| (*self.braid_words(&w[0], &w[1])).clone())
    }

    pub fn try_braid_r(&self, t: &TensorElement) -> Result<TensorElement> {
        let grade = t
            .terms()
            .map(|(w, f)| w.iter().map(Forest::grade).sum::<usize>() + f.degree())
            .max()
            .unwrap_or(0);
        self.check_grade(grade)?;
        Ok(self.braid_r(t))
    }

    /// `r(x ⊠ y)` straight from the Sweedler formula with coefficients left
    /// inside the factors, normalised at the end. Agrees with
    /// `braid_r(tensor_bimod(x, y))` exactly when `r` is well defined on `⊠`.
    pub fn braid_r_direct(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> TensorElement {
        let mut out = TensorElement::zero(2);
        for (a, f) in x.terms() {
            for (b, g) in y.terms() {
                for [a1, a2, a3] in unshuffle3(a) {
                    for [b1, b2, b3] in unshuffle3(b) {
                        let left = self.word_on_element(&a1, g, &b1).mul_coeff(f);
                        if left.is_zero() {
                            continue;
                        }
                        let mid = self.theta_combo(&self.word_on_word(&a2, &b2));
                        let right = combo_element(&self.gl_combo(
                            &self.gl_combo(&mid, &[(a3.clone(), num_traits::One::one())].into()),
                            &[(b3.clone(), num_traits::One::one())].into(),
                        ));
                        out.add_assign_ref(&self.tensor_bimod(&left, &right));
                    }
                }
            }
        }
        out
    }

    /// The Grossman–Larson product applied to a normalised `⊠` tensor.
    pub fn multiply_tensor(&self, t: &TensorElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (w, f) in t.terms() {
            out.add_combo(f, &self.gl_words(&w[0], &w[1]));
        }
        out
    }
}

/// Applies `r` to slots `i, i+1` of a coefficient-free-normalised tensor.
fn braid_slots(h: &Algebroid, t: &TensorElement, i: usize) -> TensorElement {
    h.map_tensor(t, |w| {
        let r = h.braid_words(&w[i], &w[i + 1]);
        let mut out = TensorElement::zero(w.len());
        for (uv, c) in r.terms() {
            let mut next = w.to_vec();
            next[i] = uv[0].clone();
            next[i + 1] = uv[1].clone();
            out.add_term(next, c.clone());
        }
        out
    })
}

/// Multiplies slots `i, i+1` with the Grossman–Larson product.
fn multiply_slots(h: &Algebroid, t: &TensorElement, i: usize) -> TensorElement {
    h.map_tensor(t, |w| {
        let mut out = TensorElement::zero(w.len() - 1);
        for (v, c) in h.gl_words(&w[i], &w[i + 1]).iter() {
            let mut next = w[..i].to_vec();
            next.push(v.clone());
            next.extend_from_slice(&w[i + 2..]);
            out.add_term(next, CoeffPoly::constant(c.clone()));
        }
        out
    })
}

/// `(id ⊗ τ ⊗ id)(Δ ⊗ Δ)` on a two-fold tensor.
fn split_and_flip(h: &Algebroid, t: &TensorElement) -> TensorElement {
    h.map_tensor(t, |w| {
        let mut out = TensorElement::zero(4);
        for (u1, u2) in unshuffle(&w[0]) {
            for (v1, v2) in unshuffle(&w[1]) {
                out.add_term(vec![u1.clone(), v1.clone(), u2.clone(), v2], CoeffPoly::one());
            }
        }
        out
    })
}

fn tensor_witness(t: &TensorElement) -> String {
    format!("t=[{t}]")
}

fn random_tensors(h: &Algebroid, cfg: &SuiteConfig, arity: usize, salt: u64) -> Vec<TensorElement> {
    let joins = vec![Join::Bimodule; arity - 1];
    case_tuples(cfg, arity, CoeffKind::Aromatic, salt)
        .iter()
        .map(|c| h.tensor(&c.iter().collect::<Vec<_>>(), &joins))
        .collect()
}

/// Checks the braiding axioms (a)–(f), the counit lemma, bimodule linearity
/// and well-definedness of `r` on `⊠`.
pub fn check_braiding(h: &Algebroid, cfg: &SuiteConfig) -> Vec<BraidReport> {
    let g = cfg.max_grade;
    let pairs = random_tensors(h, cfg, 2, 31);
    let triples = random_tensors(h, cfg, 3, 32);
    let elements = case_tuples(cfg, 2, CoeffKind::Aromatic, 33);
    let one = AlgebroidElement::one();
    let mut out = Vec::new();

    out.push(run_cases("a", g, &pairs, |t| {
        let lhs = split_and_flip(h, &h.braid_r(t));
        let flipped = split_and_flip(h, t);
        let rhs = braid_slots(h, &braid_slots(h, &flipped, 0), 2);
        (lhs != rhs).then(|| tensor_witness(t))
    }));
    out.push(run_cases("b", g, &pairs, |t| {
        (h.multiply_tensor(&h.braid_r(t)) != h.multiply_tensor(t)).then(|| tensor_witness(t))
    }));
    out.push(run_cases("c", g, &triples, |t| {
        let lhs = multiply_slots(h, t, 0);
        let lhs = braid_slots(h, &lhs, 0);
        let rhs = multiply_slots(h, &braid_slots(h, &braid_slots(h, t, 1), 0), 1);
        (lhs != rhs).then(|| tensor_witness(t))
    }));
    out.push(run_cases("d", g, &triples, |t| {
        let lhs = braid_slots(h, &multiply_slots(h, t, 1), 0);
        let rhs = multiply_slots(h, &braid_slots(h, &braid_slots(h, t, 0), 1), 0);
        (lhs != rhs).then(|| tensor_witness(t))
    }));
    out.push(run_cases("e", g, &elements, |c| {
        let x = &c[0];
        expect_eq(&h.braid_r(&h.tensor_bimod(&one, x)), &h.tensor_bimod(x, &one), &[x])
    }));
    out.push(run_cases("f", g, &elements, |c| {
        let x = &c[0];
        expect_eq(&h.braid_r(&h.tensor_bimod(x, &one)), &h.tensor_bimod(&one, x), &[x])
    }));
    out.push(run_cases("counit-lemma", g, &elements, |c| {
        let (x, y) = (&c[0], &c[1]);
        let lhs = h.multiply_tensor(&h.braid_r(&h.tensor_bimod(x, y))).counit();
        let rhs = h.gl_product(x, &AlgebroidElement::iota(y.counit())).counit();
        expect_eq(&lhs, &rhs, &[x, y])
    }));
    out.push(run_cases("bimodule-left", g, &elements, |c| {
        let (x, y) = (&c[0], &c[1]);
        let f = y.terms().map(|(_, f)| f.clone()).next().unwrap_or_default();
        let fx = h.gl_product(&AlgebroidElement::iota(f.clone()), x);
        let lhs = h.braid_r(&h.tensor_bimod(&fx, y));
        let rhs = h.braid_r(&h.tensor_bimod(x, y)).mul_coeff(&f);
        expect_eq(&lhs, &rhs, &[x, y])
    }));
    out.push(run_cases("bimodule-right", g, &elements, |c| {
        let (x, y) = (&c[0], &c[1]);
        let f = x.terms().map(|(_, f)| f.clone()).next().unwrap_or_default();
        let iota_f = AlgebroidElement::iota(f);
        let lhs = h.braid_r(&h.tensor_bimod(x, &h.gl_product(y, &iota_f)));
        let mut rhs = TensorElement::zero(2);
        for (w, c) in h.braid_r(&h.tensor_bimod(x, y)).terms() {
            let u = AlgebroidElement::pure(c.clone(), w[0].clone());
            let v = h.gl_product(&AlgebroidElement::word(w[1].clone()), &iota_f);
            rhs.add_assign_ref(&h.tensor_bimod(&u, &v));
        }
        expect_eq(&lhs, &rhs, &[x, y])
    }));
    out.push(run_cases("well-defined", g, &elements, |c| {
        let (x, y) = (&c[0], &c[1]);
        expect_eq(&h.braid_r_direct(x, y), &h.braid_r(&h.tensor_bimod(x, y)), &[x, y])
    }));
    out
}

pub struct BraidingSuite;

impl Suite for BraidingSuite {
    fn name(&self) -> &'static str {
        "braiding"
    }

    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckReport> {
        check_braiding(&Algebroid::default(), cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> AlgebroidElement {
        AlgebroidElement::parse(s).unwrap()
    }

    #[test]
    fn braid_of_two_leaves() {
        let h = Algebroid::default();
        let r = h.braid_r(&h.tensor_bimod(&el("o"), &el("o")));
        assert_eq!(r.dump(), "-1 | 1 | [o]\n1 | o | o\n1 | [o] | 1\n");
        assert_eq!(h.multiply_tensor(&r), el("o o ; [o]"));
    }

    #[test]
    fn unit_laws_on_a_chain() {
        let h = Algebroid::default();
        let x = el("[o]");
        let one = AlgebroidElement::one();
        assert_eq!(h.braid_r(&h.tensor_bimod(&one, &x)), h.tensor_bimod(&x, &one));
        assert_eq!(h.braid_r(&h.tensor_bimod(&x, &one)), h.tensor_bimod(&one, &x));
    }
}
