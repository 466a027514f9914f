//! The action post-Hopf algebroid `H = R ⊗ T(kOT)`.
//!
//! [`Algebroid`] carries the anchor and memo tables; every structure map is a
//! method on it. Coefficient-free computations (words acting on words) are
//! cached, so repeated identity checks over a basis stay cheap.

mod element;

use std::sync::Arc;

use dashmap::DashMap;
use num_traits::One;

pub use element::{AlgebroidElement, TensorElement, WordCombo};
pub(crate) use element::combo_add;

use crate::anchor::{Anchor, FreeAnchor};
use crate::coeffs::{CoeffPoly, Scalar};
use crate::error::{Error, Result};
use crate::trees::{Forest, PlanarTree};

pub const DEFAULT_MAX_GRADE: usize = 14;

/// How two adjacent tensor slots are glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Join {
    /// Tensor of left `R`-modules: a coefficient in front of the right slot
    /// moves to the front of the whole tensor.
    Central,
    /// Bimodule tensor over the Grossman–Larson product:
    /// `x ⊠ f·y = (x *▷ ι(f)) ⊠ y`.
    Bimodule,
}

pub struct Algebroid {
    anchor: Arc<dyn Anchor>,
    max_grade: usize,
    letter_word: DashMap<(PlanarTree, Forest), Arc<WordCombo>>,
    word_word: DashMap<(Forest, Forest), Arc<WordCombo>>,
    word_elem: DashMap<(Forest, CoeffPoly, Forest), Arc<AlgebroidElement>>,
    action: DashMap<(Forest, CoeffPoly), CoeffPoly>,
    gl_words: DashMap<(Forest, Forest), Arc<WordCombo>>,
    s_gl: DashMap<Forest, Arc<WordCombo>>,
    pub(crate) braid_words: DashMap<(Forest, Forest), Arc<TensorElement>>,
}

impl Default for Algebroid {
    fn default() -> Self {
        Self::new(Arc::new(FreeAnchor))
    }
}

impl std::fmt::Debug for Algebroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebroid")
            .field("anchor", &self.anchor.name())
            .field("max_grade", &self.max_grade)
            .finish()
    }
}

/// All ordered splittings of a word into two complementary subwords, with
/// multiplicity (`2^n` entries for `n` letters).
pub fn unshuffle(w: &Forest) -> Vec<(Forest, Forest)> {
    let letters = w.trees();
    let n = letters.len();
    (0u64..1 << n)
        .map(|mask| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, t) in letters.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(t.clone());
                } else {
                    right.push(t.clone());
                }
            }
            (Forest::new(left), Forest::new(right))
        })
        .collect()
}

/// All ordered splittings into three subwords (`3^n` entries), i.e. the
/// Sweedler triple of `(Δ ⊗ id)Δ`.
pub fn unshuffle3(w: &Forest) -> Vec<[Forest; 3]> {
    let letters = w.trees();
    let n = letters.len();
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut parts: [Vec<PlanarTree>; 3] = Default::default();
            for t in letters {
                parts[code % 3].push(t.clone());
                code /= 3;
            }
            parts.map(Forest::new)
        })
        .collect()
}

fn prepend(t: &PlanarTree, w: &Forest) -> Forest {
    Forest::single(t.clone()).concat(w)
}

impl Algebroid {
    pub fn new(anchor: Arc<dyn Anchor>) -> Self {
        Algebroid {
            anchor,
            max_grade: DEFAULT_MAX_GRADE,
            letter_word: DashMap::new(),
            word_word: DashMap::new(),
            word_elem: DashMap::new(),
            action: DashMap::new(),
            gl_words: DashMap::new(),
            s_gl: DashMap::new(),
            braid_words: DashMap::new(),
        }
    }

    pub fn with_max_grade(mut self, max_grade: usize) -> Self {
        self.max_grade = max_grade;
        self
    }

    pub fn anchor(&self) -> &Arc<dyn Anchor> {
        &self.anchor
    }

    pub fn max_grade(&self) -> usize {
        self.max_grade
    }

    pub fn check_grade(&self, requested: usize) -> Result<()> {
        if requested > self.max_grade {
            Err(Error::Capacity {
                what: "combined grade",
                requested,
                bound: self.max_grade,
            })
        } else {
            Ok(())
        }
    }

    fn derive(&self, tau: &PlanarTree, f: &CoeffPoly) -> CoeffPoly {
        self.anchor.derive(tau, f)
    }

    /// `x ▷ w` for a single tree and a coefficient-free word.
    pub fn letter_on_word(&self, x: &PlanarTree, w: &Forest) -> Arc<WordCombo> {
        let key = (x.clone(), w.clone());
        if let Some(hit) = self.letter_word.get(&key) {
            return hit.clone();
        }
        let mut out = WordCombo::new();
        if let Some((y, rest)) = w.split_first() {
            for (t, m) in x.left_graft(y) {
                combo_add(&mut out, prepend(&t, &rest), Scalar::from_integer(m.into()));
            }
            for (z, c) in self.letter_on_word(x, &rest).iter() {
                combo_add(&mut out, prepend(y, z), c.clone());
            }
        }
        let out = Arc::new(out);
        self.letter_word.insert(key, out.clone());
        out
    }

    /// `a ▷ y` for coefficient-free words.
    pub fn word_on_word(&self, a: &Forest, y: &Forest) -> Arc<WordCombo> {
        let key = (a.clone(), y.clone());
        if let Some(hit) = self.word_word.get(&key) {
            return hit.clone();
        }
        let out = match a.split_first() {
            None => {
                let mut c = WordCombo::new();
                c.insert(y.clone(), Scalar::one());
                Arc::new(c)
            }
            Some((x, rest)) if rest.is_empty() => self.letter_on_word(x, y),
            Some((x, rest)) => {
                // (x A') ▷ Y = x ▷ (A' ▷ Y) − (x ▷ A') ▷ Y
                let mut c = WordCombo::new();
                for (z, k) in self.word_on_word(&rest, y).iter() {
                    for (v, m) in self.letter_on_word(x, z).iter() {
                        combo_add(&mut c, v.clone(), k * m);
                    }
                }
                for (w, k) in self.letter_on_word(x, &rest).iter() {
                    for (v, m) in self.word_on_word(w, y).iter() {
                        combo_add(&mut c, v.clone(), -(k * m));
                    }
                }
                Arc::new(c)
            }
        };
        self.word_word.insert(key, out.clone());
        out
    }

    /// `a ▷ (g·y)` for coefficient-free words `a`, `y`.
    pub fn word_on_element(&self, a: &Forest, g: &CoeffPoly, y: &Forest) -> Arc<AlgebroidElement> {
        if let Some(c) = g.as_constant() {
            let combo = self.word_on_word(a, y);
            let mut out = AlgebroidElement::zero();
            out.add_combo(&CoeffPoly::constant(c), &combo);
            return Arc::new(out);
        }
        let key = (a.clone(), g.clone(), y.clone());
        if let Some(hit) = self.word_elem.get(&key) {
            return hit.clone();
        }
        let mut out = AlgebroidElement::zero();
        match a.split_first() {
            None => out.add_term(y.clone(), g.clone()),
            Some((x, rest)) if rest.is_empty() => {
                out.add_term(y.clone(), self.derive(x, g));
                out.add_combo(g, &self.letter_on_word(x, y));
            }
            Some((x, rest)) => {
                let letter = Forest::single(x.clone());
                for (z, h) in self.word_on_element(&rest, g, y).terms() {
                    out.add_assign_ref(&self.word_on_element(&letter, h, z));
                }
                for (w, k) in self.letter_on_word(x, &rest).iter() {
                    let part = self.word_on_element(w, g, y);
                    out.add_assign_ref(&part.scale(&-k));
                }
            }
        }
        let out = Arc::new(out);
        self.word_elem.insert(key, out.clone());
        out
    }

    /// The extended post-Lie product `a ▷ b`.
    pub fn triangle(&self, a: &AlgebroidElement, b: &AlgebroidElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (w, f) in a.terms() {
            for (y, g) in b.terms() {
                out.add_mul_coeff(f, &self.word_on_element(w, g, y));
            }
        }
        out
    }

    pub fn try_triangle(&self, a: &AlgebroidElement, b: &AlgebroidElement) -> Result<AlgebroidElement> {
        self.check_grade(a.max_grade() + b.max_grade())?;
        Ok(self.triangle(a, b))
    }

    /// `a ▷ b` through the module action: `f a ▷ g b = f (a₁ ⇀ g)(a₂ ▷ b)`.
    /// Independent of [`Algebroid::triangle`]; used as a cross-check.
    pub fn triangle_via_action(&self, a: &AlgebroidElement, b: &AlgebroidElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (w, f) in a.terms() {
            for (w1, w2) in unshuffle(w) {
                for (y, g) in b.terms() {
                    let h = f * &self.action_word(&w1, g);
                    out.add_combo(&h, &self.word_on_word(&w2, y));
                }
            }
        }
        out
    }

    /// `a ⇀ g` for a coefficient-free word (Gavrilov's K-map recursion).
    pub fn action_word(&self, a: &Forest, g: &CoeffPoly) -> CoeffPoly {
        if a.is_empty() {
            return g.clone();
        }
        if g.as_constant().is_some() {
            return CoeffPoly::zero();
        }
        let key = (a.clone(), g.clone());
        if let Some(hit) = self.action.get(&key) {
            return hit.clone();
        }
        let (v, rest) = a.split_first().expect("nonempty word");
        let mut out = self.derive(v, &self.action_word(&rest, g));
        if !rest.is_empty() {
            for (w, k) in self.letter_on_word(v, &rest).iter() {
                out.add_scaled(&self.action_word(w, g), &-k);
            }
        }
        self.action.insert(key, out.clone());
        out
    }

    /// The action `X ⇀ g` of `H` on `R`; coefficients of `X` multiply after
    /// the word acts.
    pub fn module_action(&self, x: &AlgebroidElement, g: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (w, f) in x.terms() {
            out.add_assign_ref(&(f * &self.action_word(w, g)));
        }
        out
    }

    /// `x(f) = ε(x ▷ ι(f))`.
    pub fn lu_action(&self, x: &AlgebroidElement, f: &CoeffPoly) -> CoeffPoly {
        self.triangle(x, &AlgebroidElement::iota(f.clone())).counit()
    }

    /// Unshuffle coproduct into `H ⊗_R H`.
    pub fn coproduct(&self, x: &AlgebroidElement) -> TensorElement {
        let mut out = TensorElement::zero(2);
        for (w, f) in x.terms() {
            for (l, r) in unshuffle(w) {
                out.add_term(vec![l, r], f.clone());
            }
        }
        out
    }

    pub fn counit(&self, x: &AlgebroidElement) -> CoeffPoly {
        x.counit()
    }

    pub fn antipode_concat(&self, x: &AlgebroidElement) -> AlgebroidElement {
        x.antipode_concat()
    }

    /// Grossman–Larson product of coefficient-free words.
    pub fn gl_words(&self, a: &Forest, b: &Forest) -> Arc<WordCombo> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.gl_words.get(&key) {
            return hit.clone();
        }
        let mut out = WordCombo::new();
        for (a1, a2) in unshuffle(a) {
            for (v, k) in self.word_on_word(&a2, b).iter() {
                combo_add(&mut out, a1.concat(v), k.clone());
            }
        }
        let out = Arc::new(out);
        self.gl_words.insert(key, out.clone());
        out
    }

    /// Grossman–Larson product `x *▷ y = x₁(x₂ ▷ y)`.
    pub fn gl_product(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (w, f) in x.terms() {
            for (y_word, g) in y.terms() {
                if let Some(c) = g.as_constant() {
                    out.add_combo(&f.scale(&c), &self.gl_words(w, y_word));
                    continue;
                }
                for (a1, a2) in unshuffle(w) {
                    let right = self.word_on_element(&a2, g, y_word);
                    for (v, h) in right.terms() {
                        out.add_term(a1.concat(v), f * h);
                    }
                }
            }
        }
        out
    }

    pub fn try_gl_product(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> Result<AlgebroidElement> {
        self.check_grade(x.max_grade() + y.max_grade())?;
        Ok(self.gl_product(x, y))
    }

    /// Grossman–Larson product through the smash-product formula
    /// `f a *▷ g b = f (a₁ ⇀ g)(a₂ *▷ b)`. Cross-check for [`Algebroid::gl_product`].
    pub fn gl_product_via_smash(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (a, f) in x.terms() {
            for (b, g) in y.terms() {
                for (a1, a2) in unshuffle(a) {
                    let h = f * &self.action_word(&a1, g);
                    out.add_combo(&h, &self.gl_words(&a2, b));
                }
            }
        }
        out
    }

    /// Grossman–Larson antipode on a coefficient-free word, from
    /// `x₁ *▷ S▷(x₂) = ε(x)` solved by recursion on word length.
    pub fn gl_antipode_word(&self, w: &Forest) -> Arc<WordCombo> {
        if let Some(hit) = self.s_gl.get(w) {
            return hit.clone();
        }
        let mut out = WordCombo::new();
        if w.is_empty() {
            out.insert(Forest::empty(), Scalar::one());
        } else {
            for (w1, w2) in unshuffle(w) {
                if w1.is_empty() {
                    continue;
                }
                for (z, k) in self.gl_antipode_word(&w2).iter() {
                    for (v, m) in self.gl_words(&w1, z).iter() {
                        combo_add(&mut out, v.clone(), -(k * m));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.s_gl.insert(w.clone(), out.clone());
        out
    }

    /// `θ(f a) = (S▷(a₁) ⇀ f) S▷(a₂)`.
    pub fn theta(&self, x: &AlgebroidElement) -> AlgebroidElement {
        let mut out = AlgebroidElement::zero();
        for (w, f) in x.terms() {
            if f.as_constant().is_some() {
                out.add_combo(f, &self.gl_antipode_word(w));
                continue;
            }
            for (w1, w2) in unshuffle(w) {
                let mut h = CoeffPoly::zero();
                for (z, k) in self.gl_antipode_word(&w1).iter() {
                    h.add_scaled(&self.action_word(z, f), k);
                }
                if !h.is_zero() {
                    out.add_combo(&h, &self.gl_antipode_word(&w2));
                }
            }
        }
        out
    }

    /// Normal form of `x₁ ⋄ x₂ ⋄ … ⋄ xₙ`, where `joins[i]` glues slot `i`
    /// to slot `i + 1`.
    pub fn tensor(&self, factors: &[&AlgebroidElement], joins: &[Join]) -> TensorElement {
        assert_eq!(joins.len() + 1, factors.len().max(1), "one join per adjacent pair");
        let mut state = TensorElement::pure(CoeffPoly::one(), Vec::new());
        for (i, factor) in factors.iter().enumerate() {
            let mut next = TensorElement::zero(i + 1);
            for (words, c) in state.terms() {
                for (b, g) in factor.terms() {
                    for (h, mut pushed) in self.push_coefficient(words, joins, g) {
                        pushed.push(b.clone());
                        next.add_term(pushed, c * &h);
                    }
                }
            }
            state = next;
        }
        state
    }

    /// `x ⊗_R y`.
    pub fn tensor_r(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> TensorElement {
        self.tensor(&[x, y], &[Join::Central])
    }

    /// `x ⊠ y`.
    pub fn tensor_bimod(&self, x: &AlgebroidElement, y: &AlgebroidElement) -> TensorElement {
        self.tensor(&[x, y], &[Join::Bimodule])
    }

    /// Moves a coefficient standing in front of slot `words.len()` to the
    /// front of the tensor.
    fn push_coefficient(&self, words: &[Forest], joins: &[Join], g: &CoeffPoly) -> Vec<(CoeffPoly, Vec<Forest>)> {
        let k = words.len();
        if k == 0 || g.as_constant().is_some() || joins[k - 1] == Join::Central {
            return vec![(g.clone(), words.to_vec())];
        }
        let mut out = Vec::new();
        for (u, v) in unshuffle(&words[k - 1]) {
            let h = self.action_word(&v, g);
            if h.is_zero() {
                continue;
            }
            for (c, mut ws) in self.push_coefficient(&words[..k - 1], joins, &h) {
                ws.push(u.clone());
                out.push((c, ws));
            }
        }
        out
    }

    /// Applies `f` to every pure term of a normalised tensor and re-normalises,
    /// keeping the leading coefficient in front.
    pub fn map_tensor(
        &self,
        t: &TensorElement,
        mut f: impl FnMut(&[Forest]) -> TensorElement,
    ) -> TensorElement {
        let mut out: Option<TensorElement> = None;
        for (words, c) in t.terms() {
            let image = f(words);
            match &mut out {
                Some(acc) => acc.add_mul_coeff(c, &image),
                None => out = Some(image.mul_coeff(c)),
            }
        }
        out.unwrap_or_else(|| TensorElement::zero(t.arity()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchor::ZeroAnchor;

    fn el(s: &str) -> AlgebroidElement {
        AlgebroidElement::parse(s).unwrap()
    }

    fn poly(s: &str) -> CoeffPoly {
        CoeffPoly::parse(s).unwrap()
    }

    #[test]
    fn triangle_examples() {
        let h = Algebroid::default();
        let x = el("g | [o] o ; 1/2 | o");
        assert_eq!(h.triangle(&AlgebroidElement::one(), &x), x);
        assert_eq!(h.triangle(&x, &AlgebroidElement::one()), AlgebroidElement::iota(x.counit()));
        assert_eq!(h.triangle(&el("o o"), &el("o")), el("[oo]"));
        assert_eq!(h.triangle(&el("o"), &el("g | 1")), el("g^(o) | 1"));
        assert_eq!(h.triangle(&el("o"), &el("[o]")), el("[oo] ; [[o]]"));
    }

    #[test]
    fn triangle_routes_agree() {
        let h = Algebroid::default();
        let a = el("f | o [o] ; 2 | o o");
        let b = el("g*h | o ; g^(o) | [o] ; 3 | 1");
        assert_eq!(h.triangle(&a, &b), h.triangle_via_action(&a, &b));
    }

    #[test]
    fn module_action_examples() {
        let h = Algebroid::default();
        let g = poly("g");
        assert_eq!(h.module_action(&el("o"), &g), poly("g^(o)"));
        assert_eq!(h.module_action(&AlgebroidElement::one(), &g), g);
        assert_eq!(h.module_action(&el("o o"), &g), poly("g^(o,o) - g^([o])"));
    }

    #[test]
    fn coproduct_examples() {
        let h = Algebroid::default();
        let d = h.coproduct(&el("o"));
        assert_eq!(d.dump(), "1 | 1 | o\n1 | o | 1\n");
        let d = h.coproduct(&el("o o"));
        assert_eq!(d.dump(), "1 | 1 | o o\n2 | o | o\n1 | o o | 1\n");
        let d = h.coproduct(&el("f | 1"));
        assert_eq!(d.dump(), "f | 1 | 1\n");
    }

    #[test]
    fn gl_examples() {
        let h = Algebroid::default();
        let x = el("f | [o] ; o o");
        assert_eq!(h.gl_product(&AlgebroidElement::one(), &x), x);
        assert_eq!(h.gl_product(&x, &AlgebroidElement::one()), x);
        assert_eq!(h.gl_product(&el("o"), &el("o")), el("o o ; [o]"));
        assert_eq!(h.gl_product(&el("f | o"), &el("g | 1")), el("f*g^(o) | 1 ; f*g | o"));
    }

    #[test]
    fn theta_examples() {
        let h = Algebroid::default();
        assert_eq!(h.theta(&AlgebroidElement::one()), AlgebroidElement::one());
        assert_eq!(h.theta(&el("o")), el("-1 | o"));
        assert_eq!(h.theta(&el("f | o")), el("-f | o ; -f^(o) | 1"));
        let x = el("f | o [o] ; g | o");
        assert_eq!(h.theta(&h.theta(&x)), x);
    }

    #[test]
    fn lu_action_examples() {
        let h = Algebroid::default();
        let g = poly("g");
        assert_eq!(h.lu_action(&el("o"), &g), poly("g^(o)"));
        assert_eq!(h.lu_action(&AlgebroidElement::one(), &g), g);
        let oo = h.gl_product(&el("o"), &el("o"));
        assert_eq!(h.lu_action(&oo, &g), poly("g^(o,o)"));
    }

    #[test]
    fn bimodule_tensor_moves_coefficients_through_gl() {
        let h = Algebroid::default();
        let t = h.tensor_bimod(&el("o"), &el("g | 1"));
        // o ⊠ g·1 = (o *▷ ι(g)) ⊠ 1 = g·o ⊠ 1 + g^(o)·1 ⊠ 1
        assert_eq!(t.dump(), "g^(o) | 1 | 1\ng | o | 1\n");
        let t = h.tensor_r(&el("o"), &el("g | 1"));
        assert_eq!(t.dump(), "g | o | 1\n");
    }

    #[test]
    fn zero_anchor_treats_coefficients_as_scalars() {
        let h = Algebroid::new(Arc::new(ZeroAnchor));
        assert!(h.triangle(&el("o"), &el("g | 1")).is_zero());
        assert_eq!(h.theta(&el("f | o")), el("-f | o"));
    }

    #[test]
    fn capacity_guard() {
        let h = Algebroid::default().with_max_grade(3);
        assert!(matches!(
            h.try_triangle(&el("o o"), &el("[o]")),
            Err(Error::Capacity { .. })
        ));
    }
}
