//! Affine selectors on the restriction polytope and the inputs that realize them.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::{is_positive, Scalar, Tolerances};
use crate::system::AffineControlSystem;

/// An affine map on `G`, given by its values at the vertices of `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLaw<S> {
    vertices: Vec<Vector<S>>,
    values: Vec<Vector<S>>,
    independent: Vec<usize>,
}

impl<S: Scalar> AffineLaw<S> {
    pub fn new(vertices: Vec<Vector<S>>, values: Vec<Vector<S>>, tau_rank: f64) -> Result<Self> {
        if vertices.len() != values.len() || vertices.is_empty() {
            return Err(Error::Dimension(format!(
                "{} vertices but {} values",
                vertices.len(),
                values.len()
            )));
        }
        let n = vertices[0].len();
        if vertices.iter().chain(&values).any(|v| v.len() != n) {
            return Err(Error::Dimension("law vertices and values must share one dimension".into()));
        }
        let independent = linalg::affinely_independent_subset(&vertices, tau_rank);
        Ok(Self {
            vertices,
            values,
            independent,
        })
    }

    pub fn constant(vertices: Vec<Vector<S>>, b: &[S], tau_rank: f64) -> Result<Self> {
        let values = vec![b.to_vec(); vertices.len()];
        Self::new(vertices, values, tau_rank)
    }

    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    /// `f(o_i)`, aligned with [`vertices`](Self::vertices).
    pub fn values(&self) -> &[Vector<S>] {
        &self.values
    }

    /// Indices of an affinely independent subset spanning `aff(G)`.
    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    /// `F, g` with `f(x) = F x + g` on `aff(G)`; only emitted when `G` is a
    /// simplex, so the vertex values determine the map uniquely.
    pub fn global_form(&self) -> Option<(Matrix<S>, Vector<S>)> {
        (self.independent.len() == self.vertices.len()).then(|| {
            let points: Vec<Vector<S>> = self.independent.iter().map(|&i| self.vertices[i].clone()).collect();
            let values: Vec<Vector<S>> = self.independent.iter().map(|&i| self.values[i].clone()).collect();
            affine_interpolant(&points, &values)
        })
    }

    /// `f(x)` for `x` in `aff(G)`; `None` off the affine hull.
    pub fn eval(&self, x: &[S], tau: f64) -> Option<Vector<S>> {
        let points: Vec<Vector<S>> = self.independent.iter().map(|&i| self.vertices[i].clone()).collect();
        let values: Vec<Vector<S>> = self.independent.iter().map(|&i| self.values[i].clone()).collect();
        let w = linalg::affine_coordinates(&points, x, tau)?;
        Some(linalg::combine(&w, &values))
    }

    pub fn to_f64(&self) -> AffineLaw<f64> {
        AffineLaw {
            vertices: self.vertices.iter().map(|v| linalg::to_f64_vec(v)).collect(),
            values: self.values.iter().map(|v| linalg::to_f64_vec(v)).collect(),
            independent: self.independent.clone(),
        }
    }
}

/// `F, g` with `F p_i + g = y_i` for affinely independent `p_i` and `F` zero on
/// the orthogonal complement of their directions.
pub fn affine_interpolant<S: Scalar>(points: &[Vector<S>], values: &[Vector<S>]) -> (Matrix<S>, Vector<S>) {
    let n = points[0].len();
    let m = values[0].len();
    let k = points.len() - 1;
    if k == 0 {
        return (Matrix::zeros(m, n), values[0].clone());
    }
    let d = Matrix::from_columns(
        &points[1..].iter().map(|p| linalg::sub(p, &points[0])).collect::<Vec<_>>(),
        n,
    );
    let y = Matrix::from_columns(
        &values[1..].iter().map(|v| linalg::sub(v, &values[0])).collect::<Vec<_>>(),
        m,
    );
    let dt = d.transpose();
    let gram_inv = linalg::inverse(&dt.mul(&d), 0.0).expect("affinely independent points");
    let f = y.mul(&gram_inv).mul(&dt);
    let g = linalg::sub(&values[0], &f.mul_vec(&points[0]));
    (f, g)
}

/// `u` realizing `A x + B u + a = f(x)` on `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct InputLaw<S> {
    /// Least-norm `u(o_i)`, aligned with the law's vertices.
    pub vertex_inputs: Vec<Vector<S>>,
    /// `u(x) = K x + k` on `aff(G)`.
    pub gain: Matrix<S>,
    pub offset: Vector<S>,
}

/// Least-norm inputs `u(o_i) = B^T (B B^T)^+ (f(o_i) - A o_i - a)`.
pub fn recover_input<S: Scalar>(sys: &AffineControlSystem<S>, law: &AffineLaw<S>, tol: &Tolerances) -> Result<InputLaw<S>> {
    let mut inputs = Vec::with_capacity(law.vertices().len());
    for (o, f) in law.vertices().iter().zip(law.values()) {
        let drift = sys.drift(o);
        let r = linalg::sub(f, &drift);
        let scale = 1f64.max(linalg::norm2_f64(f)).max(linalg::norm2_f64(&drift));
        let bound = if S::EXACT { 0.0 } else { tol.solve * scale };
        let Some(u) = sys.least_norm_input(&r, tol.rank) else {
            let residual = linalg::norm2_f64(&sys.annihilator().mul_vec(&r));
            return Err(Error::ResidualTooLarge { residual, bound });
        };
        let miss = linalg::sub(&sys.b().mul_vec(&u), &r);
        if is_positive(&linalg::norm_inf(&miss), tol.solve, scale) {
            return Err(Error::ResidualTooLarge {
                residual: linalg::norm2_f64(&miss),
                bound,
            });
        }
        inputs.push(u);
    }
    let points: Vec<Vector<S>> = law.independent().iter().map(|&i| law.vertices()[i].clone()).collect();
    let values: Vec<Vector<S>> = law.independent().iter().map(|&i| inputs[i].clone()).collect();
    let (gain, offset) = affine_interpolant(&points, &values);
    Ok(InputLaw {
        vertex_inputs: inputs,
        gain,
        offset,
    })
}
