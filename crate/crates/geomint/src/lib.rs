//! Numerical side: elementary differentials on matrix Lie groups, steppers
//! built from vector-field series, and volume/order experiments.

pub mod error;
pub mod eval;
pub mod experiment;
pub mod field;
pub mod func;
pub mod group;
pub mod poly;
pub mod stepper;
pub mod volume;

pub use error::{GeomError, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentResult};
pub use field::{build_field, FrameVectorField};
pub use func::{DerivMode, ScalarFunction};
pub use group::{group_by_name, GroupFrame, Mat, MatrixGroup};
pub use poly::Poly9;
pub use stepper::{stepper_by_name, Stepper};
pub use volume::{slope_estimate, step_volume};
