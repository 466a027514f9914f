//! The base algebra of coefficients: a free commutative differential algebra
//! on named aroma generators, with one derivation for every planar tree.
//!
//! A generator carries the ordered list of trees whose derivations have been
//! applied to it (innermost first), so `derive(τ, g)` is the new generator
//! `g^(τ)`. Derivations by distinct trees satisfy no relations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::trees::PlanarTree;

pub type Scalar = num_rational::BigRational;

/// Name of the degree-2 aroma standing for `E_i[F[f^i]]`.
pub const DIV_DF_AROMA: &str = "a2";

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AromaGenerator {
    base: Arc<str>,
    applied: Vec<PlanarTree>,
    base_degree: usize,
}

impl AromaGenerator {
    pub fn new(base: &str) -> Self {
        Self::with_base_degree(base, 0)
    }

    pub fn with_base_degree(base: &str, base_degree: usize) -> Self {
        AromaGenerator {
            base: Arc::from(base),
            applied: Vec::new(),
            base_degree,
        }
    }

    /// The registered aroma `E_i[F[f^i]]`.
    pub fn div_df() -> Self {
        Self::with_base_degree(DIV_DF_AROMA, 2)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn base_degree(&self) -> usize {
        self.base_degree
    }

    /// Trees whose derivations were applied, innermost first.
    pub fn applied(&self) -> &[PlanarTree] {
        &self.applied
    }

    pub fn degree(&self) -> usize {
        self.base_degree + self.applied.iter().map(PlanarTree::vertex_count).sum::<usize>()
    }

    /// The generator `self^(.., tau)`.
    pub fn apply(&self, tau: &PlanarTree) -> Self {
        let mut applied = self.applied.clone();
        applied.push(tau.clone());
        AromaGenerator {
            base: self.base.clone(),
            applied,
            base_degree: self.base_degree,
        }
    }
}

impl fmt::Display for AromaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if !self.applied.is_empty() {
            f.write_str("^(")?;
            for (i, t) in self.applied.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(t.encoding())?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AromaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Commutative monomial: sorted generators with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(AromaGenerator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: AromaGenerator) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (AromaGenerator, u32)>) -> Self {
        let mut map: BTreeMap<AromaGenerator, u32> = BTreeMap::new();
        for (g, e) in factors {
            if e > 0 {
                *map.entry(g).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(AromaGenerator, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(g, e)| g.degree() * *e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial with exact rational coefficients. No zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(scalar(n))
    }

    pub fn generator(g: AromaGenerator) -> Self {
        Self::term(Monomial::generator(g), Scalar::one())
    }

    /// Shorthand for a degree-0 generator with no applied derivation.
    pub fn var(base: &str) -> Self {
        Self::generator(AromaGenerator::new(base))
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CoeffPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut out = CoeffPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// Highest monomial degree; 0 for constants and zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign_ref(&mut self, other: &CoeffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &CoeffPoly, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Scalar) -> CoeffPoly {
        if factor.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &CoeffPoly) -> CoeffPoly {
        if self.is_zero() || other.is_zero() {
            return CoeffPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = CoeffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Part of homogeneous monomial degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> CoeffPoly {
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a map generator-wise as a derivation (Leibniz rule).
    pub fn derive_with(&self, mut on_generator: impl FnMut(&AromaGenerator) -> CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, c) in &self.terms {
            for (idx, (g, e)) in m.factors().iter().enumerate() {
                let dg = on_generator(g);
                if dg.is_zero() {
                    continue;
                }
                let rest = Monomial::from_factors(
                    m.factors()
                        .iter()
                        .enumerate()
                        .map(|(j, (h, k))| if j == idx { (h.clone(), k - 1) } else { (h.clone(), *k) }),
                );
                let factor = c * scalar(*e as i64);
                for (dm, dc) in &dg.terms {
                    out.add_term(rest.mul(dm), &factor * dc);
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &BaseDegrees::default())
    }

    pub fn parse_with(text: &str, degrees: &BaseDegrees) -> Result<Self> {
        PolyParser {
            src: text.as_bytes(),
            pos: 0,
            degrees,
        }
        .parse()
    }
}

/// The free tree-indexed derivation: appends `tau` to every generator and
/// extends by the Leibniz rule. Raises degree by `vertex_count(tau)`.
pub fn derive(tau: &PlanarTree, f: &CoeffPoly) -> CoeffPoly {
    f.derive_with(|g| CoeffPoly::generator(g.apply(tau)))
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffPoly({self})")
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for CoeffPoly {
    type Output = CoeffPoly;
    fn add(mut self, rhs: CoeffPoly) -> CoeffPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Sub for CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: CoeffPoly) -> CoeffPoly {
        &self - &rhs
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        self.scale(&-Scalar::one())
    }
}

impl Neg for CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        -&self
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        self.mul_ref(rhs)
    }
}

impl Mul for CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: CoeffPoly) -> CoeffPoly {
        self.mul_ref(&rhs)
    }
}

/// Base degree per generator symbol; unknown symbols get 0.
#[derive(Clone, Debug)]
pub struct BaseDegrees(HashMap<String, usize>);

impl Default for BaseDegrees {
    fn default() -> Self {
        let mut map = HashMap::new();
        map.insert(DIV_DF_AROMA.to_string(), 2);
        BaseDegrees(map)
    }
}

impl BaseDegrees {
    pub fn register(&mut self, base: &str, degree: usize) {
        self.0.insert(base.to_string(), degree);
    }

    pub fn degree_of(&self, base: &str) -> usize {
        self.0.get(base).copied().unwrap_or(0)
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    degrees: &'a BaseDegrees,
}

impl PolyParser<'_> {
    fn parse(mut self) -> Result<CoeffPoly> {
        let mut out = CoeffPoly::zero();
        self.skip_ws();
        let mut sign = Scalar::one();
        if self.eat(b'-') {
            sign = -sign;
        } else {
            self.eat(b'+');
        }
        loop {
            self.skip_ws();
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            self.skip_ws();
            if self.eat(b'+') {
                sign = Scalar::one();
            } else if self.eat(b'-') {
                sign = -Scalar::one();
            } else if self.pos == self.src.len() {
                return Ok(out);
            } else {
                return Err(self.error("expected `+`, `-` or end of input"));
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let mut coeff = Scalar::one();
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.rational()?,
                Some(c) if c.is_ascii_alphabetic() => factors.push(self.generator_power()?),
                _ => return Err(self.error("expected a number or a generator")),
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial::from_factors(factors), coeff))
    }

    fn rational(&mut self) -> Result<Scalar> {
        let num = self.integer()?;
        if self.eat(b'/') {
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            Ok(Scalar::new(num, den))
        } else {
            Ok(Scalar::from_integer(num))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse::<BigInt>().expect("valid digits"))
    }

    fn generator_power(&mut self) -> Result<(AromaGenerator, u32)> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let base = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let mut g = AromaGenerator::with_base_degree(base, self.degrees.degree_of(base));
        if self.src[self.pos..].starts_with(b"^(") {
            self.pos += 2;
            loop {
                let tree_start = self.pos;
                while self.peek().is_some_and(|c| c == b'o' || c == b'[' || c == b']') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[tree_start..self.pos]).expect("ascii");
                let tree = PlanarTree::parse(text).map_err(|e| match e {
                    Error::Parse { offset, message } => Error::Parse {
                        offset: offset + tree_start,
                        message,
                    },
                    other => other,
                })?;
                g = g.apply(&tree);
                if self.eat(b',') {
                    continue;
                }
                if self.eat(b')') {
                    break;
                }
                return Err(self.error("expected `,` or `)` in derivation list"));
            }
        }
        let mut exp = 1u32;
        if self.peek() == Some(b'^') && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let e = self.integer()?;
            exp = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
        }
        Ok((g, exp))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == b' ' || c == b'\t') {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::parse(self.pos, message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> PlanarTree {
        PlanarTree::leaf()
    }

    #[test]
    fn ring_units() {
        let f = CoeffPoly::parse("2*g*h - 1/3*g^(o) + 5").unwrap();
        assert_eq!(&f + &CoeffPoly::zero(), f);
        assert_eq!(&f * &CoeffPoly::one(), f);
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn derive_examples() {
        let g = CoeffPoly::var("g");
        let h = CoeffPoly::var("h");
        assert_eq!(derive(&o(), &g).to_string(), "g^(o)");
        assert!(derive(&o(), &CoeffPoly::one()).is_zero());
        let gh = &g * &h;
        let expected = &(&derive(&o(), &g) * &h) + &(&g * &derive(&o(), &h));
        assert_eq!(derive(&o(), &gh), expected);
    }

    #[test]
    fn derivations_do_not_commute() {
        let g = CoeffPoly::var("g");
        let chain = PlanarTree::parse("[o]").unwrap();
        let ab = derive(&chain, &derive(&o(), &g));
        let ba = derive(&o(), &derive(&chain, &g));
        assert_ne!(ab, ba);
        assert_eq!(ab.to_string(), "g^(o,[o])");
        assert_eq!(ab.degree(), 3);
    }

    #[test]
    fn powers_and_leibniz() {
        let g2 = CoeffPoly::parse("g^2").unwrap();
        assert_eq!(derive(&o(), &g2).to_string(), "2*g*g^(o)");
    }

    #[test]
    fn display_parse_round_trip() {
        for text in ["0", "1", "-1/2", "g", "-g^(o,[o])", "3/2*a2*g^2 - h + 1", "g^(o)^3*h"] {
            let p = CoeffPoly::parse(text).unwrap();
            let again = CoeffPoly::parse(&p.to_string()).unwrap();
            assert_eq!(p, again, "{text}");
        }
        assert_eq!(CoeffPoly::parse("a2").unwrap().degree(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(CoeffPoly::parse("g +"), Err(Error::Parse { .. })));
        assert!(matches!(CoeffPoly::parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(CoeffPoly::parse("g^(x)"), Err(Error::Parse { offset: 3, .. })));
    }
}
