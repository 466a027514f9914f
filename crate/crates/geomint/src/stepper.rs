//! One-step maps `q ↦ q·exp(v(q))` and the reference flow.

use std::sync::Arc;

use nalgebra::DVector;

use posthopf_core::registry::Registry;
use posthopf_core::series::step_fields;
use posthopf_core::TruncatedSeries;

use crate::error::{GeomError, Result};
use crate::eval::eval_lie;
use crate::field::FrameVectorField;
use crate::group::{GroupFrame, Mat};

pub const DEFAULT_TOL: f64 = 1e-12;

pub type IncrementMap<'a> = Box<dyn Fn(&Mat) -> Result<DVector<f64>> + Send + Sync + 'a>;

pub trait Stepper: Send + Sync {
    fn name(&self) -> &'static str;

    /// Algebra increment `v` with `ψ_t(q) = q·exp(v)`.
    fn increment(&self, field: &FrameVectorField, q: &Mat, t: f64) -> Result<DVector<f64>>;

    /// The increment as a smooth function of `q` near `p`. Adaptive methods
    /// freeze their step sequence at `p` so the map can be differentiated.
    fn increment_map<'a>(&'a self, field: &'a FrameVectorField, _p: &Mat, t: f64) -> Result<IncrementMap<'a>> {
        Ok(Box::new(move |q| self.increment(field, q, t)))
    }
}

/// Exponential of a truncated vector-field series: `v = Σ_k t^k X_k(q)`.
pub struct SeriesStepper {
    name: &'static str,
    series: TruncatedSeries,
}

impl SeriesStepper {
    pub fn from_method(method: &str) -> Result<Self> {
        let recipe = step_fields().get(method)?;
        Ok(SeriesStepper {
            name: recipe.name(),
            series: recipe.field(3)?,
        })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }
}

impl Stepper for SeriesStepper {
    fn name(&self) -> &'static str {
        self.name
    }

    fn increment(&self, field: &FrameVectorField, q: &Mat, t: f64) -> Result<DVector<f64>> {
        let mut v = DVector::zeros(field.dim());
        for (k, x) in self.series.coeffs().iter().enumerate().skip(1) {
            if !x.is_zero() {
                v += eval_lie(x, field, q)? * t.powi(k as i32);
            }
        }
        Ok(v)
    }
}

/// The exact flow, integrated by Runge–Kutta–Munthe-Kaas with an embedded
/// Dormand–Prince 5(4) pair in exponential coordinates.
pub struct ReferenceStepper {
    pub tol: f64,
}

impl Stepper for ReferenceStepper {
    fn name(&self) -> &'static str {
        "reference"
    }

    fn increment(&self, field: &FrameVectorField, q: &Mat, t: f64) -> Result<DVector<f64>> {
        Ok(reference_flow(field, q, t, self.tol)?.increment)
    }

    fn increment_map<'a>(&'a self, field: &'a FrameVectorField, p: &Mat, t: f64) -> Result<IncrementMap<'a>> {
        let steps = reference_flow(field, p, t, self.tol)?.steps;
        Ok(Box::new(move |q| flow_with_steps(field, q, &steps)))
    }
}

pub fn steppers(tol: f64) -> Registry<dyn Stepper> {
    let lie: Arc<dyn Stepper> = Arc::new(SeriesStepper::from_method("lie-euler").expect("registered method"));
    let aromatic: Arc<dyn Stepper> = Arc::new(SeriesStepper::from_method("aromatic").expect("registered method"));
    let reference: Arc<dyn Stepper> = Arc::new(ReferenceStepper { tol });
    Registry::new("method")
        .with("lie-euler", lie)
        .with("aromatic", aromatic)
        .with("reference", reference)
}

pub fn stepper_by_name(name: &str, tol: f64) -> Result<Arc<dyn Stepper>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(GeomError::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(steppers(tol).get(name)?)
}

/// `q·exp(v)` computed as `q + q·(exp(v) − I)`.
pub fn translate(frame: &GroupFrame, q: &Mat, v: &DVector<f64>) -> Mat {
    q + q * frame.expm1(&frame.hat(v))
}

pub fn step(stepper: &dyn Stepper, field: &FrameVectorField, q: &Mat, t: f64) -> Result<Mat> {
    let v = stepper.increment(field, q, t)?;
    Ok(translate(field.frame(), q, &v))
}

/// `n` steps of size `t`.
pub fn integrate(stepper: &dyn Stepper, field: &FrameVectorField, q: &Mat, t: f64, n: usize) -> Result<Mat> {
    (0..n).try_fold(*q, |acc, _| step(stepper, field, &acc, t))
}

// Bernoulli numbers B_0..B_16 with B_1 = −1/2.
const BERNOULLI: [f64; 17] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
];

/// `ζ' = Σ_k B_k/k! (−ad_ζ)^k F`, the derivative of `ζ` in `q = q₀·exp(ζ)`.
fn dexpinv(frame: &GroupFrame, zeta: &DVector<f64>, f: &DVector<f64>) -> DVector<f64> {
    let mut term = f.clone();
    let mut out = f.clone();
    let mut factorial = 1.0;
    for (k, b) in BERNOULLI.iter().enumerate().skip(1) {
        term = -frame.bracket(zeta, &term);
        factorial *= k as f64;
        if *b != 0.0 {
            out += &term * (b / factorial);
        }
        if term.amax() == 0.0 {
            break;
        }
    }
    out
}

const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step of size `h` from the chart at `q`; returns the
/// fifth-order `ζ` and the embedded error estimate.
fn dopri_step(field: &FrameVectorField, q: &Mat, h: f64) -> (DVector<f64>, DVector<f64>) {
    let frame = field.frame();
    let rhs = |zeta: &DVector<f64>| dexpinv(frame, zeta, &field.at(&translate(frame, q, zeta)));
    let d = field.dim();
    let mut k: Vec<DVector<f64>> = Vec::with_capacity(7);
    k.push(rhs(&DVector::zeros(d)));
    for row in A {
        let stage = row
            .iter()
            .zip(&k)
            .fold(DVector::zeros(d), |acc, (a, ki)| acc + ki * (a * h));
        k.push(rhs(&stage));
    }
    let combine = |b: &[f64; 7]| {
        b.iter()
            .zip(&k)
            .fold(DVector::zeros(d), |acc, (bi, ki)| acc + ki * (bi * h))
    };
    let z5 = combine(&B5);
    let err = &z5 - combine(&B4);
    (z5, err)
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    /// `v` with `flow_t(q) = q·exp(v)`.
    pub increment: DVector<f64>,
    /// Accepted step sizes.
    pub steps: Vec<f64>,
}

const MAX_STEPS: usize = 1_000_000;

/// Adaptive integration of the flow of `field` from `q0` over time `t`.
pub fn reference_flow(field: &FrameVectorField, q0: &Mat, t: f64, tol: f64) -> Result<FlowResult> {
    let (n, steps) = adaptive_flow(field, q0, t, tol)?;
    Ok(FlowResult {
        increment: field.frame().vee(&field.frame().log1p(&n)?),
        steps,
    })
}

/// End point of the flow; valid for horizons where no single logarithm is.
pub fn reference_point(field: &FrameVectorField, q0: &Mat, t: f64, tol: f64) -> Result<Mat> {
    let (n, _) = adaptive_flow(field, q0, t, tol)?;
    Ok(q0 + q0 * n)
}

/// Returns `N` with `flow_t(q0) = q0·(I + N)` and the accepted steps.
fn adaptive_flow(field: &FrameVectorField, q0: &Mat, t: f64, tol: f64) -> Result<(Mat, Vec<f64>)> {
    if tol.is_nan() || tol <= 0.0 || t.is_nan() || t < 0.0 {
        return Err(GeomError::Config(format!("invalid flow request: t = {t}, tol = {tol}")));
    }
    let frame = field.frame();
    let mut n = Mat::zeros();
    let mut steps = Vec::new();
    let mut done = 0.0;
    let mut h = t;
    while done < t {
        if steps.len() >= MAX_STEPS {
            return Err(GeomError::Numeric("reference flow exceeded the step limit".into()));
        }
        let last = done + h >= t * (1.0 - 1e-14);
        if last {
            h = t - done;
        }
        let q = q0 + q0 * n;
        let (zeta, err) = dopri_step(field, &q, h);
        let scale = err
            .iter()
            .zip(zeta.iter())
            .map(|(e, z)| e.abs() / (tol * (1.0 + z.abs())))
            .fold(0.0, f64::max);
        if !scale.is_finite() {
            return Err(GeomError::Numeric("non-finite value in the reference flow".into()));
        }
        if scale <= 1.0 {
            let x = frame.expm1(&frame.hat(&zeta));
            n = n + x + n * x;
            steps.push(h);
            done = if last { t } else { done + h };
        }
        let factor = if scale == 0.0 { 5.0 } else { (0.9 * scale.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < t * 1e-14 {
            return Err(GeomError::Numeric("reference flow step size underflow".into()));
        }
    }
    Ok((n, steps))
}

/// The flow with a prescribed step sequence, no error control.
pub fn flow_with_steps(field: &FrameVectorField, q0: &Mat, steps: &[f64]) -> Result<DVector<f64>> {
    let frame = field.frame();
    let mut n = Mat::zeros();
    for &h in steps {
        let q = q0 + q0 * n;
        let (zeta, _) = dopri_step(field, &q, h);
        let x = frame.expm1(&frame.hat(&zeta));
        n = n + x + n * x;
    }
    Ok(frame.vee(&frame.log1p(&n)?))
}
