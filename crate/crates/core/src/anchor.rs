//! How a single tree acts on coefficients: the anchor of the free
//! post-Lie–Rinehart algebra.

use std::fmt;
use std::sync::Arc;

use crate::coeffs::{self, CoeffPoly};
use crate::error::Result;
use crate::registry::Registry;
use crate::trees::PlanarTree;

pub trait Anchor: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// The derivation of `R` attached to the tree `tau`.
    fn derive(&self, tau: &PlanarTree, f: &CoeffPoly) -> CoeffPoly;
}

/// Free tree-indexed derivations (no relations between them).
#[derive(Debug, Default, Clone, Copy)]
pub struct FreeAnchor;

impl Anchor for FreeAnchor {
    fn name(&self) -> &'static str {
        "free"
    }

    fn derive(&self, tau: &PlanarTree, f: &CoeffPoly) -> CoeffPoly {
        coeffs::derive(tau, f)
    }
}

/// Every derivation is zero: coefficients behave as scalars and the
/// algebroid reduces to a post-Hopf algebra.
#[derive(Debug, Default, Clone, Copy)]
pub struct ZeroAnchor;

impl Anchor for ZeroAnchor {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn derive(&self, _tau: &PlanarTree, _f: &CoeffPoly) -> CoeffPoly {
        CoeffPoly::zero()
    }
}

pub fn anchors() -> Registry<dyn Anchor> {
    let free: Arc<dyn Anchor> = Arc::new(FreeAnchor);
    let zero: Arc<dyn Anchor> = Arc::new(ZeroAnchor);
    Registry::new("anchor").with("free", free).with("zero", zero)
}

pub fn anchor_by_name(name: &str) -> Result<Arc<dyn Anchor>> {
    anchors().get(name)
}
