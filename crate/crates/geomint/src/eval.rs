//! Numeric meaning of trees, forests, aromas and Lie elements for a field
//! `F = f^i E_i`. Forest operators freeze coefficients at the evaluation
//! point and apply frame derivatives with the leftmost letter outermost.

use nalgebra::DVector;
use num_traits::ToPrimitive;

use posthopf_core::coeffs::DIV_DF_AROMA;
use posthopf_core::{AlgebroidElement, AromaGenerator, CoeffPoly, Forest, PlanarTree};

use crate::error::{GeomError, Result};
use crate::field::FrameVectorField;
use crate::func::ScalarFunction;
use crate::group::{GroupFrame, Mat};
use crate::poly::Poly9;

/// Largest tree evaluated; `d^(n-1)` index tuples are summed per vertex.
pub const MAX_EVAL_GRADE: usize = 8;

/// Step for the outer finite differences used by derived aromas.
const AROMA_FD_STEP: f64 = 1e-3;

fn check_grade(n: usize) -> Result<()> {
    if n > MAX_EVAL_GRADE {
        return Err(GeomError::Capacity {
            what: "evaluation grade",
            requested: n,
            bound: MAX_EVAL_GRADE,
        });
    }
    Ok(())
}

/// All index tuples in `0..d` of length `k`, first index varying slowest.
fn index_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// `Σ_a Π_j x_j^{a_j} · E_{a_1}…E_{a_k} φ (p)` for frozen vectors `x_j`.
fn frozen_operator(letters: &[DVector<f64>], phi: &dyn ScalarFunction, p: &Mat) -> Result<f64> {
    let d = letters.first().map_or(0, |x| x.len());
    if letters.is_empty() {
        return Ok(phi.value(p));
    }
    let mut total = 0.0;
    for idx in index_tuples(d, letters.len()) {
        let weight: f64 = letters.iter().zip(&idx).map(|(x, &a)| x[a]).product();
        if weight != 0.0 {
            total += weight * phi.derivative(&idx, p)?;
        }
    }
    Ok(total)
}

/// Elementary differential of a tree as frame coefficients at `p`.
pub fn eval_tree(tau: &PlanarTree, field: &FrameVectorField, p: &Mat) -> Result<DVector<f64>> {
    check_grade(tau.vertex_count())?;
    let letters = tau
        .children()
        .iter()
        .map(|c| eval_tree(c, field, p))
        .collect::<Result<Vec<_>>>()?;
    let d = field.dim();
    let mut out = DVector::zeros(d);
    for i in 0..d {
        out[i] = frozen_operator(&letters, field.component(i), p)?;
    }
    Ok(out)
}

/// A forest acting on a scalar function as a frozen-coefficient operator.
pub fn eval_forest_op(
    w: &Forest,
    field: &FrameVectorField,
    phi: &dyn ScalarFunction,
    p: &Mat,
) -> Result<f64> {
    check_grade(w.grade())?;
    let letters = w
        .trees()
        .iter()
        .map(|t| eval_tree(t, field, p))
        .collect::<Result<Vec<_>>>()?;
    frozen_operator(&letters, phi, p)
}

/// `Σ_w c_w(p) · w[φ](p)` for an element of the algebroid.
pub fn eval_element_op(
    x: &AlgebroidElement,
    field: &FrameVectorField,
    phi: &dyn ScalarFunction,
    p: &Mat,
) -> Result<f64> {
    let mut total = 0.0;
    for (w, c) in x.terms() {
        total += eval_coeff(c, field, p)? * eval_forest_op(w, field, phi, p)?;
    }
    Ok(total)
}

/// `(Y▷X)^i = Y[x^i]`, the flat connection of the frame.
pub fn connection(y: &FrameVectorField, x: &FrameVectorField, p: &Mat) -> Result<DVector<f64>> {
    let yv = y.at(p);
    let d = x.dim();
    let mut out = DVector::zeros(d);
    for i in 0..d {
        for j in 0..d {
            if yv[j] != 0.0 {
                out[i] += yv[j] * x.component(i).derivative(&[j], p)?;
            }
        }
    }
    Ok(out)
}

/// `[X, Y]^k = x^i y^j c_ijk`, minus the torsion of the flat connection.
pub fn torsion_bracket(frame: &GroupFrame, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    frame.bracket(x, y)
}

/// `Div F = Σ_i E_i[f^i]` (the frame is unimodular).
pub fn divergence(field: &FrameVectorField, p: &Mat) -> Result<f64> {
    (0..field.dim()).try_fold(0.0, |acc, i| Ok(acc + field.component(i).derivative(&[i], p)?))
}

/// The aroma `E_i[F[f^i]] = E_i[f^j] E_j[f^i] + f^j E_i E_j[f^i]`.
pub fn eval_aroma(field: &FrameVectorField, p: &Mat) -> Result<f64> {
    let d = field.dim();
    let f = field.at(p);
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            total += field.component(j).derivative(&[i], p)? * field.component(i).derivative(&[j], p)?;
            total += f[j] * field.component(i).derivative(&[i, j], p)?;
        }
    }
    Ok(total)
}

fn eval_generator(g: &AromaGenerator, field: &FrameVectorField, p: &Mat) -> Result<f64> {
    let Some((last, inner_trees)) = g.applied().split_last() else {
        if g.base() == DIV_DF_AROMA {
            return eval_aroma(field, p);
        }
        return Err(GeomError::Config(format!(
            "aroma `{}` has no numeric meaning",
            g.base()
        )));
    };
    let inner = inner_trees.iter().fold(
        AromaGenerator::with_base_degree(g.base(), g.base_degree()),
        |acc, t| acc.apply(t),
    );
    // τ[ψ](p) = Σ_i τ^i(p) E_i[ψ](p) with E_i[ψ] by central differences.
    let x = eval_tree(last, field, p)?;
    let frame = field.frame();
    let mut total = 0.0;
    for i in 0..field.dim() {
        if x[i] == 0.0 {
            continue;
        }
        let e = frame.basis()[i];
        let mut di = 0.0;
        for (s, w) in [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)] {
            let q = p + p * frame.expm1(&(e * (s * AROMA_FD_STEP)));
            di += w * eval_generator(&inner, field, &q)?;
        }
        total += x[i] * di / (12.0 * AROMA_FD_STEP);
    }
    Ok(total)
}

/// Value of a coefficient polynomial at `p`.
pub fn eval_coeff(c: &CoeffPoly, field: &FrameVectorField, p: &Mat) -> Result<f64> {
    let mut total = 0.0;
    for (m, s) in c.terms() {
        let mut v = s
            .to_f64()
            .ok_or_else(|| GeomError::Numeric(format!("coefficient {s} is not representable")))?;
        for (g, k) in m.factors() {
            v *= eval_generator(g, field, p)?.powi(*k as i32);
        }
        total += v;
    }
    Ok(total)
}

/// Frame coefficients of a Lie element, through the Dynkin map
/// `τ₁…τₙ ↦ (1/n)[[τ₁, τ₂], …, τₙ]` with frozen brackets.
pub fn eval_lie(x: &AlgebroidElement, field: &FrameVectorField, p: &Mat) -> Result<DVector<f64>> {
    let mut out = DVector::zeros(field.dim());
    for (w, c) in x.terms() {
        let n = w.len();
        if n == 0 {
            return Err(GeomError::Domain(format!(
                "element with a constant term is not a vector field: {x}"
            )));
        }
        let coeff = eval_coeff(c, field, p)?;
        if coeff == 0.0 {
            continue;
        }
        let mut letters = w.trees().iter();
        let first = eval_tree(letters.next().expect("nonempty word"), field, p)?;
        let nested = letters.try_fold(first, |acc, t| {
            Ok::<_, GeomError>(field.frame().bracket(&acc, &eval_tree(t, field, p)?))
        })?;
        out += nested * (coeff / n as f64);
    }
    Ok(out)
}

/// Elementary differential of a tree as exact polynomials, for polynomial
/// fields.
pub fn tree_polys(tau: &PlanarTree, f: &[Poly9], frame: &GroupFrame) -> Result<Vec<Poly9>> {
    check_grade(tau.vertex_count())?;
    let d = frame.dim();
    let letters = tau
        .children()
        .iter()
        .map(|c| tree_polys(c, f, frame))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![Poly9::zero(); d];
    for idx in index_tuples(d, letters.len()) {
        let weight = letters
            .iter()
            .zip(&idx)
            .fold(Poly9::constant(1.0), |acc, (x, &a)| &acc * &x[a]);
        if weight.is_zero() {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let derived = idx
                .iter()
                .rev()
                .fold(f[i].clone(), |acc, &a| acc.derive(&frame.basis()[a]));
            *slot = &*slot + &(&weight * &derived);
        }
    }
    Ok(out)
}
