//! Volume change of one step and log–log slope fits.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::field::FrameVectorField;
use crate::group::Mat;
use crate::stepper::Stepper;

/// `log|det Dψ_t(p)|` with respect to Haar measure.
///
/// In left-translated exponential charts at `p` and `ψ_t(p)` the step reads
/// `G(ξ) = log(exp(−v(p))·exp(ξ)·exp(v(p·exp ξ)))`; its Jacobian at `ξ = 0`
/// is taken by fourth-order central differences with `h = max(1e-5, 1e-3·t)`.
pub fn step_volume(stepper: &dyn Stepper, field: &FrameVectorField, p: &Mat, t: f64) -> Result<f64> {
    let frame = field.frame();
    let d = frame.dim();
    let map = stepper.increment_map(field, p, t)?;
    let a = frame.expm1(&frame.hat(&(-map(p)?)));
    let chart = |xi: &DVector<f64>| -> Result<DVector<f64>> {
        let x = frame.expm1(&frame.hat(xi));
        let q = p + p * x;
        let b = frame.expm1(&frame.hat(&map(&q)?));
        // (I+a)(I+x)(I+b) − I, grouping the nearly cancelling a + b + ab first
        let n = (a + b + a * b) + x + a * x + x * b + a * x * b;
        Ok(frame.vee(&frame.log1p(&n)?))
    };
    let h = (1e-3 * t).max(1e-5);
    let mut k = DMatrix::zeros(d, d);
    for j in 0..d {
        let at = |s: f64| {
            let mut xi = DVector::zeros(d);
            xi[j] = s * h;
            chart(&xi)
        };
        let col = (at(-2.0)? - at(2.0)? + (at(1.0)? - at(-1.0)?) * 8.0) / (12.0 * h);
        k.set_column(j, &col);
        k[(j, j)] -= 1.0;
    }
    Ok(log_det_identity_plus(&k))
}

/// `log|det(I + K)|` without cancellation for small `K`, through the
/// elementary symmetric functions of the eigenvalues of `K`.
pub fn log_det_identity_plus(k: &DMatrix<f64>) -> f64 {
    let d = k.nrows();
    let mut power = DMatrix::identity(d, d);
    let mut traces = Vec::with_capacity(d);
    for _ in 0..d {
        power = &power * k;
        traces.push(power.trace());
    }
    // Newton's identities: m·e_m = Σ_{i=1}^{m} (−1)^{i−1} e_{m−i} p_i
    let mut e = vec![1.0];
    for m in 1..=d {
        let s: f64 = (1..=m)
            .map(|i| if i % 2 == 1 { 1.0 } else { -1.0 } * e[m - i] * traces[i - 1])
            .sum();
        e.push(s / m as f64);
    }
    let delta: f64 = e[1..].iter().sum();
    if delta > -1.0 {
        delta.ln_1p()
    } else {
        (1.0 + delta).abs().ln()
    }
}

/// Least-squares slope of `log y` against `log t` and the RMS residual.
pub fn slope_estimate(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 4 {
        return Err(GeomError::Domain(format!(
            "slope needs at least 4 points, got {}",
            points.len()
        )));
    }
    if let Some((t, y)) = points.iter().find(|(t, y)| !(*t > 0.0 && *y > 0.0)) {
        return Err(GeomError::Domain(format!(
            "slope needs positive data, got ({t}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(t, y)| (t.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(GeomError::Domain("slope needs distinct abscissae".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<_> = [1e-3, 2e-3, 5e-3, 1e-2, 1e-1]
            .iter()
            .map(|&t: &f64| (t, 3.0 * t.powi(4)))
            .collect();
        let (s, r) = slope_estimate(&pts).unwrap();
        assert!((s - 4.0).abs() < 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn slope_rejects_bad_input() {
        assert!(slope_estimate(&[(1.0, 1.0); 3]).is_err());
        assert!(slope_estimate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
        assert!(slope_estimate(&[(1.0, 1.0); 4]).is_err());
    }

    #[test]
    fn log_det_matches_direct_determinant() {
        let k = DMatrix::from_row_slice(3, 3, &[0.1, 0.02, -0.03, 0.01, -0.2, 0.05, 0.0, 0.04, 0.3]);
        let direct: f64 = (DMatrix::<f64>::identity(3, 3) + &k).determinant().abs().ln();
        assert!((log_det_identity_plus(&k) - direct).abs() < 1e-14);
        let tiny = DMatrix::from_row_slice(3, 3, &[1e-13, 0.0, 0.0, 0.0, 2e-13, 0.0, 0.0, 0.0, -1e-13]);
        // eigenvalues 1, 2, −1 (×1e-13): Σλ = 2e-13, Σλλ' = −1e-26, then log1p
        assert!((log_det_identity_plus(&tiny) - (2e-13 - 3e-26)).abs() < 1e-28);
    }
}
