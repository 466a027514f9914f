//! Seeded random and exhaustive inputs for identity checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebroid::AlgebroidElement;
use crate::coeffs::{ratio, AromaGenerator, CoeffPoly, Monomial};
use crate::trees::{enumerate_forests_bounded, Forest, PlanarTree};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What random coefficients look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffKind {
    /// Polynomials in a few generators, some with an applied derivation.
    Aromatic,
    /// Nonzero rational constants.
    Scalar,
}

fn generator_pool() -> Vec<AromaGenerator> {
    let o = PlanarTree::leaf();
    let g = AromaGenerator::new("g");
    let h = AromaGenerator::new("h");
    vec![g.clone(), h, g.apply(&o)]
}

fn random_scalar(rng: &mut ChaCha8Rng) -> crate::coeffs::Scalar {
    let n = loop {
        let n = rng.gen_range(-3i64..=3);
        if n != 0 {
            break n;
        }
    };
    ratio(n, rng.gen_range(1i64..=2))
}

pub fn random_coeff(rng: &mut ChaCha8Rng, kind: CoeffKind) -> CoeffPoly {
    match kind {
        CoeffKind::Scalar => CoeffPoly::constant(random_scalar(rng)),
        CoeffKind::Aromatic => {
            let pool = generator_pool();
            let mut out = CoeffPoly::zero();
            while out.is_zero() {
                for _ in 0..rng.gen_range(1..=2) {
                    let factors: Vec<_> = (0..rng.gen_range(0..=2))
                        .map(|_| (pool.choose(rng).expect("nonempty pool").clone(), 1))
                        .collect();
                    out.add_term(Monomial::from_factors(factors), random_scalar(rng));
                }
            }
            out
        }
    }
}

/// Forests of grade `≤ max_grade`, or all tuples of them whose grades sum to
/// at most `max_total`.
pub fn basis_tuples(arity: usize, max_total: usize) -> Vec<Vec<Forest>> {
    let basis = enumerate_forests_bounded(max_total, max_total.max(1))
        .expect("bound equals the requested grade");
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &out {
            let used: usize = prefix.iter().map(Forest::grade).sum();
            for w in &basis {
                if used + w.grade() <= max_total {
                    let mut t = prefix.clone();
                    t.push(w.clone());
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

/// A word with a random coefficient.
pub fn decorate(rng: &mut ChaCha8Rng, w: &Forest, kind: CoeffKind) -> AlgebroidElement {
    AlgebroidElement::pure(random_coeff(rng, kind), w.clone())
}

/// Random tuple of elements: a basis tuple of total forest grade
/// `≤ max_total`, each slot decorated, and some slots given a second term of
/// no larger grade.
pub fn random_tuple(
    rng: &mut ChaCha8Rng,
    arity: usize,
    max_total: usize,
    kind: CoeffKind,
) -> Vec<AlgebroidElement> {
    let tuples = basis_tuples(arity, max_total);
    let tuple = tuples.choose(rng).expect("at least the empty tuple").clone();
    tuple
        .iter()
        .map(|w| {
            let mut x = decorate(rng, w, kind);
            if rng.gen_bool(0.5) {
                let extra = enumerate_forests_bounded(w.grade(), w.grade().max(1))
                    .expect("within bound");
                let v = extra.choose(rng).expect("nonempty basis");
                x.add_assign_ref(&decorate(rng, v, kind));
            }
            x
        })
        .collect()
}

/// Exhaustive tuples, each slot decorated with its own random coefficient.
pub fn decorated_basis_tuples(
    rng: &mut ChaCha8Rng,
    arity: usize,
    max_total: usize,
    kind: CoeffKind,
) -> Vec<Vec<AlgebroidElement>> {
    basis_tuples(arity, max_total)
        .iter()
        .map(|t| t.iter().map(|w| decorate(rng, w, kind)).collect())
        .collect()
}
