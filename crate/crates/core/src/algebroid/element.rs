use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeffs::{BaseDegrees, CoeffPoly, Scalar};
use crate::error::{Error, Result};
use crate::trees::Forest;

/// Integer or rational combination of coefficient-free words.
pub type WordCombo = BTreeMap<Forest, Scalar>;

pub(crate) fn combo_add(into: &mut WordCombo, w: Forest, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match into.entry(w) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Finite sum of `coefficient · forest` terms: an element of `R ⊗ T(kOT)`.
///
/// Coefficients commute with words under concatenation, so each forest
/// carries a single polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebroidElement {
    terms: BTreeMap<Forest, CoeffPoly>,
}

impl AlgebroidElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1·(empty forest)`.
    pub fn one() -> Self {
        Self::word(Forest::empty())
    }

    pub fn word(w: Forest) -> Self {
        Self::pure(CoeffPoly::one(), w)
    }

    pub fn pure(f: CoeffPoly, w: Forest) -> Self {
        let mut out = Self::zero();
        out.add_term(w, f);
        out
    }

    /// The source map `ι(f) = f·1`.
    pub fn iota(f: CoeffPoly) -> Self {
        Self::pure(f, Forest::empty())
    }

    pub fn from_combo(combo: &WordCombo) -> Self {
        let mut out = Self::zero();
        for (w, c) in combo {
            out.add_term(w.clone(), CoeffPoly::constant(c.clone()));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Forest) -> Option<&CoeffPoly> {
        self.terms.get(w)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Forest, f: CoeffPoly) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&f);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &AlgebroidElement) {
        for (w, f) in &other.terms {
            self.add_term(w.clone(), f.clone());
        }
    }

    /// `self += f · other`.
    pub fn add_mul_coeff(&mut self, f: &CoeffPoly, other: &AlgebroidElement) {
        if f.is_zero() {
            return;
        }
        for (w, g) in &other.terms {
            self.add_term(w.clone(), f * g);
        }
    }

    /// `self += c · w` for every word of a combination.
    pub fn add_combo(&mut self, f: &CoeffPoly, combo: &WordCombo) {
        if f.is_zero() {
            return;
        }
        for (w, c) in combo {
            self.add_term(w.clone(), f.scale(c));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.scale(c));
        }
        out
    }

    /// Left multiplication by `ι(f)`, i.e. componentwise coefficient product.
    pub fn mul_coeff(&self, f: &CoeffPoly) -> Self {
        let mut out = Self::zero();
        out.add_mul_coeff(f, self);
        out
    }

    /// Concatenation product.
    pub fn concat(&self, other: &AlgebroidElement) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            for (v, g) in &other.terms {
                out.add_term(w.concat(v), f * g);
            }
        }
        out
    }

    /// Counit: the coefficient of the empty forest.
    pub fn counit(&self) -> CoeffPoly {
        self.terms
            .get(&Forest::empty())
            .cloned()
            .unwrap_or_default()
    }

    /// Antipode of the concatenation Hopf algebra: reverse each word with
    /// sign `(−1)^length`.
    pub fn antipode_concat(&self) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            let f = if w.len() % 2 == 1 { -f } else { f.clone() };
            out.add_term(w.reversed(), f);
        }
        out
    }

    /// Largest term grade (forest vertices plus coefficient degree).
    pub fn max_grade(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, f)| w.grade() + f.degree())
            .max()
            .unwrap_or(0)
    }

    /// Largest forest grade, ignoring coefficients.
    pub fn max_forest_grade(&self) -> usize {
        self.terms.keys().map(Forest::grade).max().unwrap_or(0)
    }

    /// Part of total grade exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (w, f) in &self.terms {
            if let Some(d) = k.checked_sub(w.grade()) {
                out.add_term(w.clone(), f.homogeneous_part(d));
            }
        }
        out
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms
            .iter()
            .all(|(w, f)| f.terms().all(|(m, _)| w.grade() + m.degree() == k))
    }

    /// Every coefficient is a rational constant.
    pub fn is_coefficient_free(&self) -> bool {
        self.terms.values().all(|f| f.as_constant().is_some())
    }

    /// Dump format: one `coeff | forest` line per term in canonical order.
    /// The zero element dumps as `0 | 1`.
    pub fn dump(&self) -> String {
        if self.terms.is_empty() {
            return "0 | 1\n".to_string();
        }
        let mut out = String::new();
        for (w, f) in &self.terms {
            out.push_str(&format!("{f} | {w}\n"));
        }
        out
    }

    /// Parses terms separated by `;` or newlines. Each term is
    /// `coeff | forest` or a bare forest with coefficient 1.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &BaseDegrees::default())
    }

    pub fn parse_with(text: &str, degrees: &BaseDegrees) -> Result<Self> {
        let mut out = Self::zero();
        let mut offset = 0;
        let mut any = false;
        for piece in text.split([';', '\n']) {
            let start = offset;
            offset += piece.len() + 1;
            if piece.trim().is_empty() {
                continue;
            }
            any = true;
            let shift = |e: Error, by: usize| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset: offset + by,
                    message,
                },
                other => other,
            };
            let (coeff, forest_text, forest_start) = match piece.find('|') {
                Some(bar) => {
                    let c = CoeffPoly::parse_with(piece[..bar].trim_end(), degrees)
                        .map_err(|e| shift(e, start))?;
                    (c, &piece[bar + 1..], start + bar + 1)
                }
                None => (CoeffPoly::one(), piece, start),
            };
            let lead = forest_text.len() - forest_text.trim_start().len();
            let forest = Forest::parse(forest_text.trim())
                .map_err(|e| shift(e, forest_start + lead))?;
            out.add_term(forest, coeff);
        }
        if !any {
            return Err(Error::parse(0, "empty element"));
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebroidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c} | {w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebroidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Add for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn add(self, rhs: &AlgebroidElement) -> AlgebroidElement {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for AlgebroidElement {
    type Output = AlgebroidElement;
    fn add(mut self, rhs: AlgebroidElement) -> AlgebroidElement {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn sub(self, rhs: &AlgebroidElement) -> AlgebroidElement {
        let mut out = self.clone();
        out.add_mul_coeff(&CoeffPoly::integer(-1), rhs);
        out
    }
}

impl Sub for AlgebroidElement {
    type Output = AlgebroidElement;
    fn sub(self, rhs: AlgebroidElement) -> AlgebroidElement {
        &self - &rhs
    }
}

impl Neg for &AlgebroidElement {
    type Output = AlgebroidElement;
    fn neg(self) -> AlgebroidElement {
        self.scale(&-Scalar::one())
    }
}

impl Neg for AlgebroidElement {
    type Output = AlgebroidElement;
    fn neg(self) -> AlgebroidElement {
        -&self
    }
}

impl FromIterator<(Forest, CoeffPoly)> for AlgebroidElement {
    fn from_iter<I: IntoIterator<Item = (Forest, CoeffPoly)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, f) in iter {
            out.add_term(w, f);
        }
        out
    }
}

/// Element of an n-fold tensor power, normalised so that every pure tensor of
/// coefficient-free words carries one coefficient in front.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TensorElement {
    arity: usize,
    terms: BTreeMap<Vec<Forest>, CoeffPoly>,
}

impl TensorElement {
    pub fn zero(arity: usize) -> Self {
        TensorElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn pure(f: CoeffPoly, words: Vec<Forest>) -> Self {
        let mut out = Self::zero(words.len());
        out.add_term(words, f);
        out
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Forest], &CoeffPoly)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, words: Vec<Forest>, f: CoeffPoly) {
        assert_eq!(words.len(), self.arity, "tensor arity mismatch");
        if f.is_zero() {
            return;
        }
        match self.terms.entry(words) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&f);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &TensorElement) {
        for (w, f) in &other.terms {
            self.add_term(w.clone(), f.clone());
        }
    }

    /// `self += f · other`.
    pub fn add_mul_coeff(&mut self, f: &CoeffPoly, other: &TensorElement) {
        for (w, g) in &other.terms {
            self.add_term(w.clone(), f * g);
        }
    }

    pub fn mul_coeff(&self, f: &CoeffPoly) -> Self {
        let mut out = Self::zero(self.arity);
        out.add_mul_coeff(f, self);
        out
    }

    /// Applies a coefficient-free linear map to every word of one slot.
    pub fn map_slot(&self, slot: usize, mut map: impl FnMut(&Forest) -> WordCombo) -> Self {
        let mut out = Self::zero(self.arity);
        for (words, f) in &self.terms {
            for (w, c) in map(&words[slot]) {
                let mut next = words.clone();
                next[slot] = w;
                out.add_term(next, f.scale(&c));
            }
        }
        out
    }

    /// Dump format: one `coeff | w1 | w2 | ...` line per term.
    /// The zero tensor dumps as `0` followed by `| 1` per slot.
    pub fn dump(&self) -> String {
        if self.terms.is_empty() {
            return format!("0{}\n", " | 1".repeat(self.arity));
        }
        let mut out = String::new();
        for (words, f) in &self.terms {
            out.push_str(&f.to_string());
            for w in words {
                out.push_str(&format!(" | {w}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (words, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})·")?;
            }
            for (j, w) in words.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ⊗ ")?;
                }
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_mul_coeff(&CoeffPoly::integer(-1), rhs);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> AlgebroidElement {
        AlgebroidElement::parse(s).unwrap()
    }

    #[test]
    fn concat_unit_and_pure_terms() {
        let x = el("g | o ; 2 | [o] o");
        assert_eq!(AlgebroidElement::one().concat(&x), x);
        assert_eq!(x.concat(&AlgebroidElement::one()), x);
        assert_eq!(el("f | o").concat(&el("g | o")), el("f*g | o o"));
    }

    #[test]
    fn concat_antipode_examples() {
        assert_eq!(el("o").antipode_concat(), el("-1 | o"));
        assert_eq!(el("o [o]").antipode_concat(), el("[o] o"));
        assert_eq!(el("f | 1").antipode_concat(), el("f | 1"));
    }

    #[test]
    fn dump_parse_round_trip() {
        let x = el("3/2*g^(o) | [o] o ; -h | 1 ; o");
        assert_eq!(AlgebroidElement::parse(&x.dump()).unwrap(), x);
        assert_eq!(AlgebroidElement::zero().dump(), "0 | 1\n");
        assert!(AlgebroidElement::parse("0 | 1").unwrap().is_zero());
    }

    #[test]
    fn parse_error_offsets_point_into_the_term() {
        match AlgebroidElement::parse("o ; g | [x]") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grades() {
        let x = el("a2 | o ; g | [o]");
        assert_eq!(x.max_grade(), 3);
        assert!(!x.is_homogeneous(3));
        assert_eq!(x.homogeneous_part(3), el("a2 | o"));
    }
}
