//! Vector fields `F = f^i E_i` in the left-invariant frame.

use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;

use posthopf_core::registry::Registry;
use posthopf_core::sample::rng;

use crate::error::{GeomError, Result};
use crate::func::{DerivMode, FdFunction, PolyFunction, ScalarFunction};
use crate::group::{GroupFrame, Mat, MatrixGroup};
use crate::poly::Poly9;

#[derive(Clone)]
pub struct FrameVectorField {
    frame: Arc<GroupFrame>,
    components: Vec<Arc<dyn ScalarFunction>>,
}

impl FrameVectorField {
    pub fn new(frame: Arc<GroupFrame>, components: Vec<Arc<dyn ScalarFunction>>) -> Result<Self> {
        if components.len() != frame.dim() {
            return Err(GeomError::Config(format!(
                "field has {} components but the frame has dimension {}",
                components.len(),
                frame.dim()
            )));
        }
        Ok(FrameVectorField { frame, components })
    }

    /// Components given as polynomials, differentiated as `mode` says.
    pub fn from_polys(frame: Arc<GroupFrame>, polys: Vec<Poly9>, mode: DerivMode) -> Result<Self> {
        let components = polys
            .into_iter()
            .map(|p| -> Arc<dyn ScalarFunction> {
                match mode {
                    DerivMode::Analytic => Arc::new(PolyFunction::new(p, frame.clone())),
                    DerivMode::FiniteDifference => {
                        Arc::new(FdFunction::new(Arc::new(move |q: &Mat| p.eval(q)), frame.clone()))
                    }
                }
            })
            .collect();
        Self::new(frame, components)
    }

    pub fn frame(&self) -> &GroupFrame {
        &self.frame
    }

    pub fn frame_arc(&self) -> Arc<GroupFrame> {
        self.frame.clone()
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn component(&self, i: usize) -> &dyn ScalarFunction {
        self.components[i].as_ref()
    }

    /// Coefficient vector `(f^1(q), …, f^d(q))`.
    pub fn at(&self, q: &Mat) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.components.iter().map(|f| f.value(q)))
    }
}

/// Builds a field on a given group.
pub trait FieldRecipe: Send + Sync {
    fn name(&self) -> &'static str;
    fn polys(&self, group: &dyn MatrixGroup, seed: u64) -> Result<Vec<Poly9>>;
}

/// `F = Σ ε_ijk E_j[g_k] E_i` with `g = (E_2[h], −E_1[h], 0)` and `h = Q_33`;
/// divergence free on SO(3).
pub struct DivFreeRecipe;

impl FieldRecipe for DivFreeRecipe {
    fn name(&self) -> &'static str {
        "divfree"
    }

    fn polys(&self, group: &dyn MatrixGroup, _seed: u64) -> Result<Vec<Poly9>> {
        if group.name() != "so3" {
            return Err(GeomError::Config(format!(
                "field `divfree` is defined on so3, not {}",
                group.name()
            )));
        }
        let e = group.frame().basis();
        let h = Poly9::entry(2, 2);
        let g = [h.derive(&e[1]), -&h.derive(&e[0]), Poly9::zero()];
        let mut f = vec![Poly9::zero(), Poly9::zero(), Poly9::zero()];
        for (i, fi) in f.iter_mut().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            // ε_ijk = +1 and ε_ikj = −1
            *fi = &g[k].derive(&e[j]) - &g[j].derive(&e[k]);
        }
        Ok(f)
    }
}

/// Affine components with seeded coefficients; generic, not divergence free.
pub struct AffineRecipe;

impl FieldRecipe for AffineRecipe {
    fn name(&self) -> &'static str {
        "affine"
    }

    fn polys(&self, group: &dyn MatrixGroup, seed: u64) -> Result<Vec<Poly9>> {
        let mut r = rng(seed ^ 0xa5a5);
        Ok((0..group.frame().dim())
            .map(|_| {
                let mut p = Poly9::constant(r.gen_range(-1.0..1.0));
                for a in 0..3 {
                    for b in 0..3 {
                        p = &p + &Poly9::entry(a, b).scale(r.gen_range(-1.0..1.0));
                    }
                }
                p
            })
            .collect())
    }
}

/// Constant components: the flow is a one-parameter subgroup.
pub struct ConstantRecipe;

impl FieldRecipe for ConstantRecipe {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn polys(&self, group: &dyn MatrixGroup, seed: u64) -> Result<Vec<Poly9>> {
        let mut r = rng(seed ^ 0x5a5a);
        Ok((0..group.frame().dim())
            .map(|_| Poly9::constant(r.gen_range(-1.0..1.0)))
            .collect())
    }
}

pub fn field_recipes() -> Registry<dyn FieldRecipe> {
    let divfree: Arc<dyn FieldRecipe> = Arc::new(DivFreeRecipe);
    let affine: Arc<dyn FieldRecipe> = Arc::new(AffineRecipe);
    let constant: Arc<dyn FieldRecipe> = Arc::new(ConstantRecipe);
    Registry::new("field")
        .with("divfree", divfree)
        .with("affine", affine)
        .with("constant", constant)
}

pub fn build_field(
    group: &dyn MatrixGroup,
    recipe: &str,
    mode: DerivMode,
    seed: u64,
) -> Result<FrameVectorField> {
    let polys = field_recipes().get(recipe)?.polys(group, seed)?;
    FrameVectorField::from_polys(Arc::new(group.frame().clone()), polys, mode)
}
