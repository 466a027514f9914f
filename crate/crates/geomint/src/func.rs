//! Scalar functions on the group with an oracle for iterated frame derivatives.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{GeomError, Result};
use crate::group::{GroupFrame, Mat};
use crate::poly::Poly9;

/// How frame derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivMode {
    Analytic,
    FiniteDifference,
}

impl std::str::FromStr for DerivMode {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(DerivMode::Analytic),
            "fd" => Ok(DerivMode::FiniteDifference),
            other => Err(GeomError::Config(format!(
                "unknown derivative mode `{other}` (expected analytic or fd)"
            ))),
        }
    }
}

pub trait ScalarFunction: Send + Sync {
    fn value(&self, q: &Mat) -> f64;

    /// `E_{d0}[E_{d1}[…E_{dk}[φ]]](q)`; the first direction is outermost.
    fn derivative(&self, dirs: &[usize], q: &Mat) -> Result<f64>;
}

/// A polynomial in the matrix entries, differentiated exactly.
pub struct PolyFunction {
    poly: Poly9,
    frame: Arc<GroupFrame>,
    cache: RwLock<HashMap<Vec<usize>, Poly9>>,
}

impl PolyFunction {
    pub fn new(poly: Poly9, frame: Arc<GroupFrame>) -> Self {
        PolyFunction {
            poly,
            frame,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn poly(&self) -> &Poly9 {
        &self.poly
    }

    /// The polynomial `E_{d0}…E_{dk} p`, memoised per direction list.
    pub fn derived(&self, dirs: &[usize]) -> Result<Poly9> {
        let d = self.frame.dim();
        if let Some(&bad) = dirs.iter().find(|&&i| i >= d) {
            return Err(GeomError::Domain(format!("frame direction {bad} out of range")));
        }
        if dirs.is_empty() {
            return Ok(self.poly.clone());
        }
        if let Some(p) = self.cache.read().expect("cache lock").get(dirs) {
            return Ok(p.clone());
        }
        let inner = self.derived(&dirs[1..])?;
        let p = inner.derive(&self.frame.basis()[dirs[0]]);
        self.cache
            .write()
            .expect("cache lock")
            .insert(dirs.to_vec(), p.clone());
        Ok(p)
    }
}

impl ScalarFunction for PolyFunction {
    fn value(&self, q: &Mat) -> f64 {
        self.poly.eval(q)
    }

    fn derivative(&self, dirs: &[usize], q: &Mat) -> Result<f64> {
        Ok(self.derived(dirs)?.eval(q))
    }
}

pub type PointFn = Arc<dyn Fn(&Mat) -> f64 + Send + Sync>;

/// Derivatives by nested fourth-order central differences with one
/// Richardson refinement.
pub struct FdFunction {
    f: PointFn,
    frame: Arc<GroupFrame>,
    max_depth: usize,
}

pub const FD_MAX_DEPTH: usize = 4;

const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

impl FdFunction {
    pub fn new(f: PointFn, frame: Arc<GroupFrame>) -> Self {
        FdFunction {
            f,
            frame,
            max_depth: FD_MAX_DEPTH,
        }
    }

    /// Step for a derivative of the given depth: `1e-4` for first
    /// derivatives, growing with depth to keep round-off in check.
    pub fn step(depth: usize) -> f64 {
        if depth <= 1 {
            1e-4
        } else {
            f64::EPSILON.powf(1.0 / (depth as f64 + 4.0))
        }
    }

    fn mixed(&self, dirs: &[usize], q: &Mat, h: f64) -> f64 {
        fn rec(this: &FdFunction, dirs: &[usize], point: Mat, h: f64) -> f64 {
            match dirs.split_first() {
                None => (this.f)(&point),
                Some((&i, rest)) => {
                    let e = this.frame.basis()[i];
                    STENCIL
                        .iter()
                        .map(|&(s, w)| {
                            let moved = point + point * this.frame.expm1(&(e * (s * h)));
                            w * rec(this, rest, moved, h)
                        })
                        .sum::<f64>()
                        / (12.0 * h)
                }
            }
        }
        rec(self, dirs, *q, h)
    }
}

impl ScalarFunction for FdFunction {
    fn value(&self, q: &Mat) -> f64 {
        (self.f)(q)
    }

    fn derivative(&self, dirs: &[usize], q: &Mat) -> Result<f64> {
        if dirs.len() > self.max_depth {
            return Err(GeomError::Config(format!(
                "finite differences support derivative depth ≤ {}, requested {}",
                self.max_depth,
                dirs.len()
            )));
        }
        if let Some(&bad) = dirs.iter().find(|&&i| i >= self.frame.dim()) {
            return Err(GeomError::Domain(format!("frame direction {bad} out of range")));
        }
        if dirs.is_empty() {
            return Ok((self.f)(q));
        }
        // The composite point q·exp(s₀e₀)·exp(s₁e₁)… realises E_{d0}[E_{d1}[…]]
        // as a mixed partial in (s₀, s₁, …) at zero.
        let h = Self::step(dirs.len());
        let coarse = self.mixed(dirs, q, h);
        let fine = self.mixed(dirs, q, h / 2.0);
        Ok((16.0 * fine - coarse) / 15.0)
    }
}
