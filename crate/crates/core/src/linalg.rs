//! Small dense linear algebra over [`Scalar`].
//!
//! Problem sizes here never exceed a handful of rows, so everything is plain
//! Gauss-Jordan elimination with partial pivoting. In exact mode pivots are
//! accepted iff they are nonzero; in float mode iff they exceed
//! `tau * max|entry|`.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

pub type Vector<S> = Vec<S>;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], k: &S) -> Vector<S> {
    a.iter().map(|x| x.clone() * k.clone()).collect()
}

/// `a + k * b`
pub fn axpy<S: Scalar>(a: &[S], k: &S, b: &[S]) -> Vector<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + k.clone() * y.clone())
        .collect()
}

pub fn zeros<S: Scalar>(n: usize) -> Vector<S> {
    vec![S::zero(); n]
}

pub fn norm_inf<S: Scalar>(a: &[S]) -> S {
    a.iter()
        .map(|x| x.abs())
        .fold(S::zero(), |m, x| if x > m { x } else { m })
}

pub fn norm2_f64<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub fn is_zero_vector<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Linear combination `sum_i weights[i] * vectors[i]`.
pub fn combine<S: Scalar>(weights: &[S], vectors: &[Vector<S>]) -> Vector<S> {
    let dim = vectors.first().map_or(0, Vec::len);
    weights
        .iter()
        .zip(vectors)
        .fold(zeros(dim), |acc, (w, v)| axpy(&acc, w, v))
}

pub fn to_f64_vec<S: Scalar>(a: &[S]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows(rows: &[Vector<S>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[Vector<S>], rows: usize) -> Self {
        Self::from_rows(columns, rows).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vector<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = self[(i, k)].clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vector<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub matrix: Matrix<S>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. Only the first `eligible_cols` columns may hold
/// pivots; trailing columns (augmented right-hand sides) are carried along.
pub fn rref_partial<S: Scalar>(m: &Matrix<S>, eligible_cols: usize, tau: f64) -> Echelon<S> {
    let mut a = m.clone();
    let threshold = tau * m.max_abs().max(f64::MIN_POSITIVE);
    let negligible = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= threshold
        }
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..eligible_cols.min(a.cols) {
        if row == a.rows {
            break;
        }
        let best = (row..a.rows)
            .filter(|&r| !negligible(&a[(r, col)]))
            .max_by(|&r1, &r2| {
                if S::EXACT {
                    // Any nonzero pivot is exact; prefer the topmost to keep results stable.
                    r2.cmp(&r1)
                } else {
                    let (x, y) = (a[(r1, col)].to_f64().abs(), a[(r2, col)].to_f64().abs());
                    x.total_cmp(&y)
                }
            });
        let Some(p) = best else {
            if !S::EXACT {
                for r in row..a.rows {
                    a[(r, col)] = S::zero();
                }
            }
            continue;
        };
        a.swap_rows(row, p);
        let inv = S::one() / a[(row, col)].clone();
        for j in 0..a.cols {
            a[(row, j)] = a[(row, j)].clone() * inv.clone();
        }
        a[(row, col)] = S::one();
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in 0..a.cols {
                let delta = factor.clone() * a[(row, j)].clone();
                a[(r, j)] = a[(r, j)].clone() - delta;
            }
            a[(r, col)] = S::zero();
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { matrix: a, pivots }
}

pub fn rref<S: Scalar>(m: &Matrix<S>, tau: f64) -> Echelon<S> {
    rref_partial(m, m.cols(), tau)
}

pub fn rank<S: Scalar>(m: &Matrix<S>, tau: f64) -> usize {
    rref(m, tau).pivots.len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<S: Scalar>(m: &Matrix<S>, tau: f64) -> Vec<Vector<S>> {
    let e = rref(m, tau);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(m.cols());
            v[f] = S::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.matrix[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// One solution of `m x = b` (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S], tau: f64) -> Option<Vector<S>> {
    assert_eq!(m.rows(), b.len(), "right-hand side length mismatch");
    let mut aug = Matrix::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols())] = b[i].clone();
    }
    let e = rref_partial(&aug, m.cols(), tau);
    let rank = e.pivots.len();
    let rhs_scale = aug.max_abs().max(f64::MIN_POSITIVE);
    for r in rank..m.rows() {
        let leftover = &e.matrix[(r, m.cols())];
        let inconsistent = if S::EXACT {
            !leftover.is_zero()
        } else {
            leftover.to_f64().abs() > tau * rhs_scale
        };
        if inconsistent {
            return None;
        }
    }
    let mut x = zeros(m.cols());
    for (r, &p) in e.pivots.iter().enumerate() {
        x[p] = e.matrix[(r, m.cols())].clone();
    }
    Some(x)
}

pub fn inverse<S: Scalar>(m: &Matrix<S>, tau: f64) -> Option<Matrix<S>> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = S::one();
    }
    let e = rref_partial(&aug, n, tau);
    if e.pivots.len() < n {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = e.matrix[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Affine coordinates of `x` with respect to affinely independent `points`
/// (`sum = 1`, `sum w_i p_i = x`), or `None` when `x` is off their affine hull.
pub fn affine_coordinates<S: Scalar>(points: &[Vector<S>], x: &[S], tau: f64) -> Option<Vector<S>> {
    let n = x.len();
    let mut rows: Vec<Vector<S>> = (0..n)
        .map(|i| points.iter().map(|p| p[i].clone()).collect())
        .collect();
    rows.push(vec![S::one(); points.len()]);
    let mut rhs = x.to_vec();
    rhs.push(S::one());
    solve(&Matrix::from_rows(&rows, points.len()), &rhs, tau)
}

/// Indices of a maximal affinely independent subset, scanning greedily.
pub fn affinely_independent_subset<S: Scalar>(points: &[Vector<S>], tau: f64) -> Vec<usize> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let mut chosen = vec![0];
    let mut diffs: Vec<Vector<S>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let mut trial = diffs.clone();
        trial.push(sub(p, first));
        if rank(&Matrix::from_rows(&trial, first.len()), tau) == trial.len() {
            diffs = trial;
            chosen.push(i);
        }
    }
    chosen
}

/// Cross product in R^3.
pub fn cross<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows[0].len();
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q(x, 1)).collect())
            .collect();
        Matrix::from_rows(&rows, cols)
    }

    #[test]
    fn rank_and_nullspace_exact() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 0.0), 2);
        let ns = nullspace(&m, 0.0);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vector(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = qm(&[&[1, 1], &[2, 2]]);
        assert!(solve(&m, &[q(1, 1), q(3, 1)], 0.0).is_none());
        let x = solve(&m, &[q(1, 1), q(2, 1)], 0.0).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(1, 1), q(2, 1)]);
    }

    #[test]
    fn inverse_round_trip_float() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]], 2);
        let inv = inverse(&m, 1e-12).unwrap();
        let id = m.mul(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).abs() < 1e-12);
            }
        }
        assert!(inverse(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]], 2), 1e-12).is_none());
    }

    #[test]
    fn affine_coordinates_of_quad_corner() {
        let pts = vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1)],
        ];
        let w = affine_coordinates(&pts, &[q(1, 1), q(1, 1)], 0.0).unwrap();
        assert_eq!(w, vec![q(-1, 1), q(1, 1), q(1, 1)]);
    }

    #[test]
    fn independent_subset_skips_collinear() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 1.0]];
        assert_eq!(affinely_independent_subset(&pts, 1e-12), vec![0, 1, 3]);
    }
}
