//! Convergence experiments over a geometric grid of step sizes.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use posthopf_core::sample::rng;
use posthopf_core::{Algebroid, TruncatedSeries};

use crate::error::{GeomError, Result};
use crate::eval::eval_element_op;
use crate::field::{build_field, FrameVectorField};
use crate::func::{DerivMode, ScalarFunction};
use crate::group::{group_by_name, Mat};
use crate::stepper::{integrate, reference_point, step, stepper_by_name, SeriesStepper};
use crate::volume::{slope_estimate, step_volume};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Volume change of a single step.
    Volume,
    /// Global error after a fixed horizon.
    Order,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub group: String,
    pub field: String,
    pub method: String,
    pub t_max: f64,
    pub t_min: f64,
    pub points: usize,
    pub derivatives: DerivMode,
    pub seed: u64,
    pub tol: f64,
    pub horizon: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Volume,
            group: "so3".into(),
            field: "divfree".into(),
            method: "lie-euler".into(),
            t_max: 1e-1,
            t_min: 1e-3,
            points: 8,
            derivatives: DerivMode::Analytic,
            seed: 0,
            tol: crate::stepper::DEFAULT_TOL,
            horizon: 0.5,
        }
    }
}

impl ExperimentConfig {
    /// Geometric grid from `t_max` down to `t_min`, strictly decreasing.
    pub fn t_grid(&self) -> Result<Vec<f64>> {
        if self.points < 5 {
            return Err(GeomError::Config(format!(
                "the step-size grid needs at least 5 points, got {}",
                self.points
            )));
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min) {
            return Err(GeomError::Config(format!(
                "step sizes need 0 < t_min < t_max, got {} and {}",
                self.t_min, self.t_max
            )));
        }
        let ratio = (self.t_min / self.t_max).ln() / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| self.t_max * (ratio * i as f64).exp())
            .collect())
    }

    pub fn base_point(&self) -> Result<Mat> {
        Ok(group_by_name(&self.group)?.random_point(&mut rng(self.seed)))
    }

    pub fn build_field(&self) -> Result<FrameVectorField> {
        let group = group_by_name(&self.group)?;
        build_field(group.as_ref(), &self.field, self.derivatives, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub t: f64,
    pub log_det: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ExperimentRow>,
    pub slope: f64,
    pub residual: f64,
}

impl ExperimentResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,log_det,abs_err,method,field,seed\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.6e},{:.12e},{:.12e},{},{},{}",
                r.t, r.log_det, r.abs_err, self.config.method, self.config.field, self.config.seed
            );
        }
        let _ = writeln!(out, "# slope={:.6} residual={:.6}", self.slope, self.residual);
        out
    }
}

/// Runs the experiment; rows follow the grid order whatever the thread count.
///
/// Volume rows report `abs_err = |log_det|`, the defect from exact volume
/// preservation. Order rows report the Frobenius distance after `horizon`
/// to the reference flow, using `⌈horizon/t⌉` equal steps.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = cfg.t_grid()?;
    let field = cfg.build_field()?;
    let stepper = stepper_by_name(&cfg.method, cfg.tol)?;
    let p = cfg.base_point()?;
    let target = match cfg.kind {
        ExperimentKind::Volume => None,
        ExperimentKind::Order => {
            if cfg.horizon.is_nan() || cfg.horizon <= 0.0 {
                return Err(GeomError::Config(format!("horizon must be positive, got {}", cfg.horizon)));
            }
            Some(reference_point(&field, &p, cfg.horizon, cfg.tol.min(1e-13))?)
        }
    };
    let rows = grid
        .par_iter()
        .map(|&t| {
            let log_det = step_volume(stepper.as_ref(), &field, &p, t)?;
            let abs_err = match &target {
                None => log_det.abs(),
                Some(end) => {
                    let n = (cfg.horizon / t).ceil() as usize;
                    let q = integrate(stepper.as_ref(), &field, &p, cfg.horizon / n as f64, n)?;
                    (q - end).norm()
                }
            };
            Ok(ExperimentRow { t, log_det, abs_err })
        })
        .collect::<Result<Vec<_>>>()?;
    let (slope, residual) = slope_estimate(&rows.iter().map(|r| (r.t, r.abs_err)).collect::<Vec<_>>())?;
    Ok(ExperimentResult {
        config: cfg.clone(),
        rows,
        slope,
        residual,
    })
}

/// Which exponential of the field a truncated series is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesExp {
    /// Grossman–Larson exponential against the exact flow.
    GrossmanLarson,
    /// Concatenation exponential against one Lie–Euler step.
    Concatenation,
}

/// `|Σ_{k≤order} t^k X_k[φ](p) − φ(ψ_t(p))|` over the grid, where `X` is the
/// chosen exponential of `tF` and `ψ_t` the matching map.
pub fn series_errors(
    kind: SeriesExp,
    cfg: &ExperimentConfig,
    order: usize,
    phi: Arc<dyn ScalarFunction>,
) -> Result<Vec<(f64, f64)>> {
    let grid = cfg.t_grid()?;
    let field = cfg.build_field()?;
    let p = cfg.base_point()?;
    let h = Algebroid::default();
    let base = TruncatedSeries::field(order);
    let series = match kind {
        SeriesExp::GrossmanLarson => base.exp_gl(&h)?,
        SeriesExp::Concatenation => base.exp_concat()?,
    };
    let values: Vec<f64> = series
        .coeffs()
        .iter()
        .map(|x| eval_element_op(x, &field, phi.as_ref(), &p))
        .collect::<Result<_>>()?;
    let lie_euler = SeriesStepper::from_method("lie-euler")?;
    grid.par_iter()
        .map(|&t| {
            let end = match kind {
                SeriesExp::GrossmanLarson => reference_point(&field, &p, t, cfg.tol.min(1e-13))?,
                SeriesExp::Concatenation => step(&lie_euler, &field, &p, t)?,
            };
            let approx: f64 = values.iter().enumerate().map(|(k, v)| v * t.powi(k as i32)).sum();
            Ok((t, (approx - phi.value(&end)).abs()))
        })
        .collect()
}
