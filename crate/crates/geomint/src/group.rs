//! Matrix Lie groups with a left-invariant frame `E_i[φ](Q) = d/ds φ(Q·exp(s e_i))`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use posthopf_core::registry::Registry;

use crate::error::{GeomError, Result};

pub type Mat = Matrix3<f64>;

/// Above this norm `expm1` and `log1p` switch away from plain Taylor series.
const SERIES_RADIUS: f64 = 0.5;

/// Basis of a matrix Lie algebra with its structure constants
/// `[e_i, e_j] = c_ijk e_k` and a coordinate map back from matrices.
#[derive(Clone, Debug)]
pub struct GroupFrame {
    basis: Vec<Mat>,
    structure: Vec<f64>,
    projector: DMatrix<f64>,
}

fn flatten(m: &Mat) -> DVector<f64> {
    DVector::from_iterator(9, m.iter().copied())
}

impl GroupFrame {
    pub fn new(basis: Vec<Mat>) -> Result<Self> {
        let d = basis.len();
        let columns: Vec<DVector<f64>> = basis.iter().map(flatten).collect();
        let stacked = DMatrix::from_columns(&columns);
        let projector = stacked
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| GeomError::Numeric(format!("degenerate algebra basis: {e}")))?;
        let mut frame = GroupFrame {
            basis,
            structure: vec![0.0; d * d * d],
            projector,
        };
        for i in 0..d {
            for j in 0..d {
                let comm = frame.basis[i] * frame.basis[j] - frame.basis[j] * frame.basis[i];
                let coords = frame.vee(&comm);
                if (frame.hat(&coords) - comm).norm() > 1e-12 {
                    return Err(GeomError::Numeric(format!(
                        "basis is not closed under the commutator ([e{i}, e{j}])"
                    )));
                }
                for k in 0..d {
                    // snap least-squares noise on integer constants
                    let c = coords[k];
                    let r = c.round();
                    frame.structure[(i * d + j) * d + k] = if (c - r).abs() < 1e-12 { r } else { c };
                }
            }
        }
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Structure constant `c_ijk`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    pub fn hat(&self, v: &DVector<f64>) -> Mat {
        self.basis
            .iter()
            .zip(v.iter())
            .fold(Mat::zeros(), |acc, (e, c)| acc + e * *c)
    }

    /// Coordinates of an algebra element (least squares on the basis).
    pub fn vee(&self, m: &Mat) -> DVector<f64> {
        &self.projector * flatten(m)
    }

    /// Algebra bracket in coordinates, `[u, v]_k = u_i v_j c_ijk`.
    pub fn bracket(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                for k in 0..d {
                    out[k] += uv * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// `max_j |Σ_i c_iji|`; zero for unimodular groups.
    pub fn unimodularity_defect(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.c(i, j, i)).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of antisymmetry or the Jacobi identity.
    pub fn jacobi_defect(&self) -> f64 {
        let d = self.dim();
        let unit = |i: usize| {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            v
        };
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                    let (a, b, c) = (unit(i), unit(j), unit(k));
                    let s = self.bracket(&a, &self.bracket(&b, &c))
                        + self.bracket(&b, &self.bracket(&c, &a))
                        + self.bracket(&c, &self.bracket(&a, &b));
                    worst = worst.max(s.amax());
                }
            }
        }
        worst
    }

    /// `exp(X) − I`, accurate relative to `|X|` for small arguments.
    pub fn expm1(&self, x: &Mat) -> Mat {
        expm1(x)
    }

    /// `log(I + N)` for `N` near zero.
    pub fn log1p(&self, n: &Mat) -> Result<Mat> {
        log1p(n)
    }
}

pub fn expm1(x: &Mat) -> Mat {
    let norm = x.norm();
    if norm > SERIES_RADIUS {
        return x.exp() - Mat::identity();
    }
    let mut term = *x;
    let mut sum = *x;
    for k in 2..60 {
        term = term * x / k as f64;
        sum += term;
        if term.norm() <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum
}

pub fn log1p(n: &Mat) -> Result<Mat> {
    let norm = n.norm();
    if norm >= 0.9 {
        return Err(GeomError::Numeric(format!(
            "logarithm chart breakdown: |M − I| = {norm:.3}"
        )));
    }
    let mut power = *n;
    let mut sum = *n;
    for k in 2..400 {
        power *= n;
        let term = power / k as f64;
        if k % 2 == 0 {
            sum -= term;
        } else {
            sum += term;
        }
        if term.norm() <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(sum)
}

/// A matrix group: an algebra frame plus a way to draw base points.
pub trait MatrixGroup: Send + Sync {
    fn name(&self) -> &'static str;
    fn frame(&self) -> &GroupFrame;
    fn random_point(&self, rng: &mut ChaCha8Rng) -> Mat;
}

pub struct So3 {
    frame: GroupFrame,
}

impl Default for So3 {
    fn default() -> Self {
        let e1 = Mat::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
        let e2 = Mat::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0);
        let e3 = Mat::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        So3 {
            frame: GroupFrame::new(vec![e1, e2, e3]).expect("so(3) basis is valid"),
        }
    }
}

impl MatrixGroup for So3 {
    fn name(&self) -> &'static str {
        "so3"
    }

    fn frame(&self) -> &GroupFrame {
        &self.frame
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Mat {
        let v = DVector::from_fn(3, |_, _| rng.gen_range(-1.5..1.5));
        self.frame.hat(&v).exp()
    }
}

/// Rigid motions of the plane as 3×3 homogeneous matrices.
pub struct Se2 {
    frame: GroupFrame,
}

impl Default for Se2 {
    fn default() -> Self {
        let rot = Mat::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let tx = Mat::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        let ty = Mat::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        Se2 {
            frame: GroupFrame::new(vec![rot, tx, ty]).expect("se(2) basis is valid"),
        }
    }
}

impl MatrixGroup for Se2 {
    fn name(&self) -> &'static str {
        "se2"
    }

    fn frame(&self) -> &GroupFrame {
        &self.frame
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Mat {
        let v = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        self.frame.hat(&v).exp()
    }
}

pub fn groups() -> Registry<dyn MatrixGroup> {
    let so3: Arc<dyn MatrixGroup> = Arc::new(So3::default());
    let se2: Arc<dyn MatrixGroup> = Arc::new(Se2::default());
    Registry::new("group").with("so3", so3).with("se2", se2)
}

pub fn group_by_name(name: &str) -> Result<Arc<dyn MatrixGroup>> {
    Ok(groups().get(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn so3_structure_constants_are_levi_civita() {
        let g = So3::default();
        let f = g.frame();
        assert_eq!(f.c(0, 1, 2), 1.0);
        assert_eq!(f.c(1, 2, 0), 1.0);
        assert_eq!(f.c(2, 0, 1), 1.0);
        assert_eq!(f.c(1, 0, 2), -1.0);
        assert_eq!(f.c(0, 0, 2), 0.0);
    }

    #[test]
    fn frames_are_unimodular_lie_algebras() {
        for name in groups().names() {
            let f = group_by_name(name).unwrap();
            assert!(f.frame().jacobi_defect() < 1e-12, "{name}");
            assert!(f.frame().unimodularity_defect() < 1e-12, "{name}");
        }
    }

    #[test]
    fn expm1_and_log1p_invert() {
        let g = So3::default();
        let x = g.frame().hat(&DVector::from_vec(vec![1e-3, -2e-3, 5e-4]));
        let back = log1p(&expm1(&x)).unwrap();
        assert!((back - x).norm() < 1e-18);
        let y = g.frame().hat(&DVector::from_vec(vec![0.3, -0.2, 0.1]));
        assert!((expm1(&y) + Mat::identity() - y.exp()).norm() < 1e-14);
        assert!((log1p(&expm1(&y)).unwrap() - y).norm() < 1e-14);
    }

    #[test]
    fn random_points_are_rotations() {
        let g = So3::default();
        let q = g.random_point(&mut ChaCha8Rng::seed_from_u64(3));
        assert!((q.transpose() * q - Mat::identity()).norm() < 1e-13);
        assert!((q.determinant() - 1.0).abs() < 1e-13);
    }
}
