//! Free post-Lie–Rinehart algebra on planar rooted trees with formal aroma
//! coefficients, and the action post-Hopf algebroid it generates.
//!
//! The base algebra is [`coeffs::CoeffPoly`]; elements of `R ⊗ T(kOT)` are
//! [`algebroid::AlgebroidElement`]s, and all structure maps live on
//! [`algebroid::Algebroid`], parameterised by an [`anchor::Anchor`].

pub mod algebroid;
pub mod anchor;
pub mod braiding;
pub mod coeffs;
pub mod error;
pub mod registry;
pub mod sample;
pub mod series;
pub mod suites;
pub mod trees;

pub use algebroid::{Algebroid, AlgebroidElement, Join, TensorElement};
pub use anchor::{Anchor, FreeAnchor, ZeroAnchor};
pub use coeffs::{derive, AromaGenerator, CoeffPoly, Monomial, Scalar};
pub use error::{Error, Result};
pub use series::TruncatedSeries;
pub use trees::{Forest, PlanarTree};
