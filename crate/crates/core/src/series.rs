//! Truncated formal series in one parameter `t` with algebroid coefficients.
//!
//! The coefficient of `t^k` must be homogeneous of grade `k` (forest vertices
//! plus coefficient degree), so every occurrence of the vector field carries
//! one power of `t`.

use std::fmt;

use num_traits::One;

use crate::algebroid::{Algebroid, AlgebroidElement};
use crate::coeffs::{ratio, scalar, AromaGenerator, CoeffPoly, Scalar};
use crate::error::{Error, Result};
use crate::trees::Forest;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    order: usize,
    coeffs: Vec<AlgebroidElement>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            coeffs: vec![AlgebroidElement::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = AlgebroidElement::one();
        s
    }

    /// Builds a series from its coefficients `[c_0, c_1, ...]`; missing
    /// degrees are zero and degrees above `order` are dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<AlgebroidElement>) -> Result<Self> {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            if !c.is_homogeneous(k) {
                return Err(Error::Domain(format!(
                    "coefficient of t^{k} is not homogeneous of grade {k}: {c}"
                )));
            }
            s.coeffs[k] = c;
        }
        Ok(s)
    }

    /// `t^k · x`.
    pub fn monomial(order: usize, k: usize, x: AlgebroidElement) -> Result<Self> {
        let mut coeffs = vec![AlgebroidElement::zero(); k];
        coeffs.push(x);
        Self::from_coeffs(order, coeffs)
    }

    /// `t · o`: the vector field itself.
    pub fn field(order: usize) -> Self {
        Self::monomial(order, 1, AlgebroidElement::word(Forest::parse("o").expect("leaf")))
            .expect("a single vertex has grade 1")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &AlgebroidElement {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[AlgebroidElement] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn debug_check(&self) {
        debug_assert!(
            self.coeffs.iter().enumerate().all(|(k, c)| c.is_homogeneous(k)),
            "series lost homogeneity"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        TruncatedSeries { order, coeffs }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// Substitutes `t ↦ c·t`.
    pub fn scale_parameter(&self, c: &Scalar) -> Self {
        let mut power = Scalar::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x.scale(&power));
            power *= c;
        }
        TruncatedSeries {
            order: self.order,
            coeffs,
        }
    }

    /// Cauchy product with the given bilinear product, truncated.
    pub fn mul_with(
        &self,
        other: &Self,
        product: impl Fn(&AlgebroidElement, &AlgebroidElement) -> AlgebroidElement,
    ) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let p = product(&self.coeffs[i], &other.coeffs[j]);
                out.coeffs[i + j].add_assign_ref(&p);
            }
        }
        out.debug_check();
        out
    }

    fn exp_with(
        &self,
        product: impl Fn(&AlgebroidElement, &AlgebroidElement) -> AlgebroidElement,
    ) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "exponential needs a series without constant term".into(),
            ));
        }
        let mut out = Self::one(self.order);
        let mut power = Self::one(self.order);
        let mut factorial = Scalar::one();
        for n in 1..=self.order {
            power = power.mul_with(self, &product);
            factorial *= scalar(n as i64);
            out = out.add(&power.scale(&(Scalar::one() / &factorial)));
        }
        Ok(out)
    }

    /// Grossman–Larson exponential `Σ X^{*n} / n!`.
    pub fn exp_gl(&self, h: &Algebroid) -> Result<Self> {
        self.exp_with(|a, b| h.gl_product(a, b))
    }

    /// Concatenation exponential `Σ X^n / n!`.
    pub fn exp_concat(&self) -> Result<Self> {
        self.exp_with(|a, b| a.concat(b))
    }

    /// Inverse of [`TruncatedSeries::exp_gl`], solved degree by degree.
    pub fn log_gl(&self, h: &Algebroid) -> Result<Self> {
        if self.coeffs[0] != AlgebroidElement::one() {
            return Err(Error::Domain("logarithm needs constant term 1".into()));
        }
        let mut log = Self::zero(self.order);
        for k in 1..=self.order {
            let partial = log.truncate(k).exp_gl(h)?;
            log.coeffs[k] = &self.coeffs[k] - &partial.coeffs[k];
        }
        log.debug_check();
        Ok(log)
    }

    /// Series of the composed flow: degreewise `self *▷ first`.
    pub fn compose_gl(&self, h: &Algebroid, first: &Self) -> Result<Self> {
        if self.coeffs[0] != AlgebroidElement::one() || first.coeffs[0] != AlgebroidElement::one() {
            return Err(Error::Domain("composition needs constant terms 1".into()));
        }
        Ok(self.mul_with(first, |a, b| h.gl_product(a, b)))
    }

    /// One `# t^k` header per degree followed by the element dump.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("# t^{k}\n"));
            out.push_str(&c.dump());
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "t^{k}·({c})")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order + 1)
    }
}

fn term(c: Scalar, forest: &str) -> AlgebroidElement {
    AlgebroidElement::pure(CoeffPoly::constant(c), Forest::parse(forest).expect("valid literal"))
}

/// The preprocessed aromatic field
/// `tF + t²/2 F▷F − t³/3 (F▷F)▷F − t³/12 a₂ F + t³/6 [F, F▷F]`,
/// with the bracket realised as the concatenation commutator.
pub fn preprocessed_field(order: usize) -> Result<TruncatedSeries> {
    if order < 3 {
        return Err(Error::Domain(format!(
            "preprocessed field needs order at least 3, got {order}"
        )));
    }
    let mut cubic = term(ratio(-1, 3), "[[o]]");
    cubic.add_term(
        Forest::parse("o").expect("leaf"),
        CoeffPoly::generator(AromaGenerator::div_df()).scale(&ratio(-1, 12)),
    );
    cubic.add_assign_ref(&term(ratio(1, 6), "o [o]"));
    cubic.add_assign_ref(&term(ratio(-1, 6), "[o] o"));
    TruncatedSeries::from_coeffs(
        order,
        vec![
            AlgebroidElement::zero(),
            term(Scalar::one(), "o"),
            term(ratio(1, 2), "[o]"),
            cubic,
        ],
    )
}

/// Vector-field series a stepper follows; registered by name.
pub trait StepField: Send + Sync {
    fn name(&self) -> &'static str;
    fn field(&self, order: usize) -> Result<TruncatedSeries>;
}

pub struct LieEulerField;

impl StepField for LieEulerField {
    fn name(&self) -> &'static str {
        "lie-euler"
    }

    fn field(&self, order: usize) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::field(order))
    }
}

pub struct AromaticField;

impl StepField for AromaticField {
    fn name(&self) -> &'static str {
        "aromatic"
    }

    fn field(&self, order: usize) -> Result<TruncatedSeries> {
        preprocessed_field(order)
    }
}

pub fn step_fields() -> crate::registry::Registry<dyn StepField> {
    let lie: std::sync::Arc<dyn StepField> = std::sync::Arc::new(LieEulerField);
    let aromatic: std::sync::Arc<dyn StepField> = std::sync::Arc::new(AromaticField);
    crate::registry::Registry::new("method")
        .with("lie-euler", lie)
        .with("aromatic", aromatic)
}

/// Modified field of the exponential-of-field method: `log_gl(exp_concat(tF̂))`.
pub fn modified_field(h: &Algebroid, method: &str, order: usize) -> Result<TruncatedSeries> {
    let field = step_fields().get(method)?.field(order)?;
    field.exp_concat()?.log_gl(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> AlgebroidElement {
        AlgebroidElement::parse(s).unwrap()
    }

    #[test]
    fn exponentials_of_the_field() {
        let h = Algebroid::default();
        let e = TruncatedSeries::field(2).exp_gl(&h).unwrap();
        assert_eq!(e.coeff(2), &el("1/2 | o o ; 1/2 | [o]"));
        let c = TruncatedSeries::field(3).exp_concat().unwrap();
        assert_eq!(c.coeff(2), &el("1/2 | o o"));
        assert_eq!(c.coeff(3), &el("1/6 | o o o"));
        assert_eq!(TruncatedSeries::zero(3).exp_gl(&h).unwrap(), TruncatedSeries::one(3));
        assert!(TruncatedSeries::one(3).exp_concat().is_err());
    }

    #[test]
    fn log_inverts_exp() {
        let h = Algebroid::default();
        let f = TruncatedSeries::field(4);
        assert_eq!(f.exp_gl(&h).unwrap().log_gl(&h).unwrap(), f);
        assert!(TruncatedSeries::one(4).log_gl(&h).unwrap().coeffs().iter().all(AlgebroidElement::is_zero));
        assert!(TruncatedSeries::zero(2).log_gl(&h).is_err());
    }

    #[test]
    fn lie_euler_modified_field_second_order() {
        let h = Algebroid::default();
        let m = modified_field(&h, "lie-euler", 2).unwrap();
        assert_eq!(m.coeff(1), &el("o"));
        assert_eq!(m.coeff(2), &el("-1/2 | [o]"));
    }

    #[test]
    fn preprocessed_field_terms() {
        let p = preprocessed_field(3).unwrap();
        assert_eq!(p.coeff(2), &el("1/2 | [o]"));
        assert_eq!(
            p.coeff(3),
            &el("-1/3 | [[o]] ; -1/12*a2 | o ; 1/6 | o [o] ; -1/6 | [o] o")
        );
        assert!(preprocessed_field(2).is_err());
    }

    #[test]
    fn composition_is_one_parameter_group() {
        let h = Algebroid::default();
        let e = TruncatedSeries::field(3).exp_gl(&h).unwrap();
        let doubled = TruncatedSeries::field(3).scale_parameter(&scalar(2)).exp_gl(&h).unwrap();
        assert_eq!(e.compose_gl(&h, &e).unwrap(), doubled);
        assert_eq!(e.compose_gl(&h, &TruncatedSeries::one(3)).unwrap(), e);
    }

    #[test]
    fn homogeneity_is_enforced() {
        assert!(TruncatedSeries::monomial(3, 2, el("o")).is_err());
        assert!(TruncatedSeries::from_coeffs(2, vec![AlgebroidElement::zero(), el("o"), el("g^(o) | o")]).is_ok());
    }
}
