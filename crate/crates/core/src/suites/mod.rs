//! Named identity-check suites. Each suite runs a list of checks over
//! exhaustive basis tuples plus seeded random samples and reports one
//! [`CheckReport`] per identity.

mod axioms;
mod degenerate;
mod theta;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebroid::{unshuffle, Algebroid, AlgebroidElement};
use crate::error::Result;
use crate::registry::Registry;
use crate::sample::{self, CoeffKind};

pub use axioms::AxiomSuite;
pub use degenerate::DegenerateSuite;
pub use theta::ThetaSuite;

/// Random samples use tuples of total forest grade at most this.
pub const SAMPLE_GRADE: usize = 4;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_grade: usize,
    pub samples: usize,
    pub seed: u64,
    pub sample_grade: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_grade: 3,
            samples: 200,
            seed: 0,
            sample_grade: SAMPLE_GRADE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub id: String,
    pub max_grade: usize,
    pub cases: usize,
    /// First failing case, in case order.
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "fail" };
        write!(f, "axiom={} cases={} status={}", self.id, self.cases, status)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, cfg: &SuiteConfig) -> Vec<CheckReport>;
}

pub fn suites() -> Registry<dyn Suite> {
    let axioms: Arc<dyn Suite> = Arc::new(AxiomSuite);
    let theta: Arc<dyn Suite> = Arc::new(ThetaSuite);
    let braiding: Arc<dyn Suite> = Arc::new(crate::braiding::BraidingSuite);
    let degenerate: Arc<dyn Suite> = Arc::new(DegenerateSuite);
    Registry::new("suite")
        .with("axioms", axioms)
        .with("theta", theta)
        .with("braiding", braiding)
        .with("degenerate", degenerate)
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    Ok(suites().get(name)?.run(cfg))
}

/// Runs `check` on every case in parallel; the witness is that of the first
/// failing case by index, so the report does not depend on scheduling.
pub fn run_cases<C: Sync>(
    id: &str,
    max_grade: usize,
    cases: &[C],
    check: impl Fn(&C) -> Option<String> + Sync,
) -> CheckReport {
    let results: Vec<Option<String>> = cases.par_iter().map(&check).collect();
    CheckReport {
        id: id.to_string(),
        max_grade,
        cases: cases.len(),
        witness: results.into_iter().flatten().next(),
    }
}

/// Exhaustive decorated basis tuples of total grade `≤ cfg.max_grade`
/// followed by `cfg.samples` random tuples.
pub fn case_tuples(cfg: &SuiteConfig, arity: usize, kind: CoeffKind, salt: u64) -> Vec<Vec<AlgebroidElement>> {
    let mut rng = sample::rng(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt);
    let mut out = sample::decorated_basis_tuples(&mut rng, arity, cfg.max_grade, kind);
    for _ in 0..cfg.samples {
        out.push(sample::random_tuple(&mut rng, arity, cfg.sample_grade, kind));
    }
    out
}

pub(crate) fn witness(inputs: &[&AlgebroidElement]) -> String {
    let names = ["x", "y", "z", "w"];
    inputs
        .iter()
        .enumerate()
        .map(|(i, e)| format!("{}=[{}]", names.get(i).unwrap_or(&"v"), e))
        .collect::<Vec<_>>()
        .join(",")
}

/// `None` when the two sides agree, otherwise the witness string.
pub(crate) fn expect_eq<T: PartialEq>(lhs: &T, rhs: &T, inputs: &[&AlgebroidElement]) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(witness(inputs))
    }
}

/// Sweedler pairs of an element, the coefficient kept with the first factor.
pub fn sweedler2(x: &AlgebroidElement) -> Vec<(AlgebroidElement, AlgebroidElement)> {
    let mut out = Vec::new();
    for (w, f) in x.terms() {
        for (a1, a2) in unshuffle(w) {
            out.push((AlgebroidElement::pure(f.clone(), a1), AlgebroidElement::word(a2)));
        }
    }
    out
}

pub(crate) fn sum(parts: impl IntoIterator<Item = AlgebroidElement>) -> AlgebroidElement {
    let mut out = AlgebroidElement::zero();
    for p in parts {
        out.add_assign_ref(&p);
    }
    out
}

/// Shared between suites: `Δ(x ▷ y) = (x₁ ▷ y₁) ⊗ (x₂ ▷ y₂)`.
pub(crate) fn coproduct_of_triangle(h: &Algebroid, x: &AlgebroidElement, y: &AlgebroidElement) -> Option<String> {
    let lhs = h.coproduct(&h.triangle(x, y));
    let mut rhs = crate::algebroid::TensorElement::zero(2);
    for (x1, x2) in sweedler2(x) {
        for (y1, y2) in sweedler2(y) {
            rhs.add_assign_ref(&h.tensor_r(&h.triangle(&x1, &y1), &h.triangle(&x2, &y2)));
        }
    }
    expect_eq(&lhs, &rhs, &[x, y])
}
