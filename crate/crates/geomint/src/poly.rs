//! Exact polynomials in the nine entries `Q_ab` of a 3×3 matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::group::Mat;

type Exponents = [u8; 9];

fn slot(a: usize, b: usize) -> usize {
    3 * a + b
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly9 {
    terms: BTreeMap<Exponents, f64>,
}

impl Poly9 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term([0; 9], c);
        p
    }

    /// The coordinate function `Q_ab` (0-based indices).
    pub fn entry(a: usize, b: usize) -> Self {
        let mut e = [0; 9];
        e[slot(a, b)] = 1;
        let mut p = Self::zero();
        p.add_term(e, 1.0);
        p
    }

    fn add_term(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn eval(&self, q: &Mat) -> f64 {
        let x: Vec<f64> = (0..9).map(|s| q[(s / 3, s % 3)]).collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(&x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Derivative along the left-invariant field of the algebra element `e`:
    /// `E[Q_ab] = (Q·e)_ab`, extended as a derivation.
    pub fn derive(&self, e: &Mat) -> Self {
        let mut out = Self::zero();
        for (exps, c) in &self.terms {
            for s in 0..9 {
                let k = exps[s];
                if k == 0 {
                    continue;
                }
                let (a, b) = (s / 3, s % 3);
                let mut reduced = *exps;
                reduced[s] -= 1;
                for m in 0..3 {
                    let w = e[(m, b)];
                    if w == 0.0 {
                        continue;
                    }
                    let mut term = reduced;
                    term[slot(a, m)] += 1;
                    out.add_term(term, c * k as f64 * w);
                }
            }
        }
        out
    }
}

impl Add for &Poly9 {
    type Output = Poly9;
    fn add(self, rhs: &Poly9) -> Poly9 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub for &Poly9 {
    type Output = Poly9;
    fn sub(self, rhs: &Poly9) -> Poly9 {
        self + &(-rhs)
    }
}

impl Neg for &Poly9 {
    type Output = Poly9;
    fn neg(self) -> Poly9 {
        self.scale(-1.0)
    }
}

impl Mul for &Poly9 {
    type Output = Poly9;
    fn mul(self, rhs: &Poly9) -> Poly9 {
        let mut out = Poly9::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for s in 0..9 {
                    e[s] += eb[s];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly9 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (s, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*Q{}{}", s / 3 + 1, s % 3 + 1)?,
                    _ => write!(f, "*Q{}{}^{k}", s / 3 + 1, s % 3 + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{MatrixGroup, So3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivative_matches_curve_difference() {
        let g = So3::default();
        let q = g.random_point(&mut ChaCha8Rng::seed_from_u64(1));
        let p = &(&Poly9::entry(2, 2) * &Poly9::entry(0, 1)) + &Poly9::entry(1, 0).scale(3.0);
        for e in g.frame().basis() {
            let h = 1e-5;
            let fd = (p.eval(&(q * (e * h).exp())) - p.eval(&(q * (e * -h).exp()))) / (2.0 * h);
            assert!((p.derive(e).eval(&q) - fd).abs() < 1e-9);
        }
    }

    #[test]
    fn ring_operations() {
        let x = Poly9::entry(0, 0);
        let y = Poly9::entry(1, 2);
        let p = &(&x + &y) * &(&x - &y);
        let q = &(&x * &x) - &(&y * &y);
        assert_eq!(p, q);
        assert_eq!(p.degree(), 2);
        assert!((&p - &q).is_zero());
    }
}
