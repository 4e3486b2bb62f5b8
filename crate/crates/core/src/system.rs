//! The affine control system `x' = A x + B u + a`, its equilibrium set
//! `O = { x : A x + a in Im(B) }`, the restriction polytope `G = O ∩ S`, and
//! the case taxonomy that decides which synthesis argument applies.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{IndexSet, Simplex};
use crate::linalg::{self, dot, sub, Matrix, Vector};
use crate::scalar::{is_positive, Scalar, Tolerances};

#[derive(Clone, Debug)]
pub struct AffineControlSystem<S> {
    a: Matrix<S>,
    b: Matrix<S>,
    offset: Vector<S>,
    input_basis: Vec<Vector<S>>,
    annihilator: Matrix<S>,
}

impl<S: Scalar> AffineControlSystem<S> {
    pub fn new(a: Matrix<S>, b: Matrix<S>, offset: Vector<S>, tau_rank: f64) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n || b.rows() != n || offset.len() != n {
            return Err(Error::Dimension(format!(
                "A is {}x{}, B is {}x{}, a has length {}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                offset.len()
            )));
        }
        // Pivot columns of B form a basis of Im(B) made of actual input directions.
        let pivots = linalg::rref(&b, tau_rank).pivots;
        let input_basis: Vec<Vector<S>> = pivots.iter().map(|&j| b.column(j)).collect();
        // Rows of M span Im(B)^perp = ker(B^T).
        let annihilator = Matrix::from_rows(&linalg::nullspace(&b.transpose(), tau_rank), n);
        Ok(Self {
            a,
            b,
            offset,
            input_basis,
            annihilator,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    pub fn offset(&self) -> &[S] {
        &self.offset
    }

    /// Columns spanning `Im(B)`; linearly independent.
    pub fn input_basis(&self) -> &[Vector<S>] {
        &self.input_basis
    }

    /// `dim Im(B)`
    pub fn input_dim(&self) -> usize {
        self.input_basis.len()
    }

    /// `M` with `y in Im(B)  <=>  M y = 0`.
    pub fn annihilator(&self) -> &Matrix<S> {
        &self.annihilator
    }

    /// `A x + a`
    pub fn drift(&self, x: &[S]) -> Vector<S> {
        linalg::add(&self.a.mul_vec(x), &self.offset)
    }

    pub fn in_input_space(&self, y: &[S], tau: f64) -> bool {
        in_row_kernel(&self.annihilator, y, tau)
    }

    /// Least-norm `u` with `B u = r`, or `None` when `r` is not in `Im(B)`.
    pub fn least_norm_input(&self, r: &[S], tau_rank: f64) -> Option<Vector<S>> {
        let bt = self.b.transpose();
        let gram = self.b.mul(&bt);
        let w = linalg::solve(&gram, r, tau_rank)?;
        Some(bt.mul_vec(&w))
    }
}

/// `M y == 0`, with `|M_i . y| <= tau |M_i| |y|` in float mode.
pub fn in_row_kernel<S: Scalar>(m: &Matrix<S>, y: &[S], tau: f64) -> bool {
    let ny = linalg::norm2_f64(y);
    (0..m.rows()).all(|i| {
        let row = m.row(i);
        !is_positive(&dot(row, y).abs(), tau, linalg::norm2_f64(row) * ny)
    })
}

/// `O = point + span(directions)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace<S> {
    pub point: Vector<S>,
    pub directions: Vec<Vector<S>>,
}

impl<S: Scalar> AffineSubspace<S> {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

/// Solves `M A x = -M a`.
pub fn equilibrium_subspace<S: Scalar>(sys: &AffineControlSystem<S>, tau_rank: f64) -> Result<AffineSubspace<S>> {
    let n = sys.dim();
    let m = sys.annihilator();
    if m.rows() == 0 {
        return Ok(AffineSubspace {
            point: linalg::zeros(n),
            directions: Matrix::<S>::identity(n).row_vecs(),
        });
    }
    let ma = m.mul(sys.a());
    let rhs: Vector<S> = m.mul_vec(sys.offset()).into_iter().map(|x| -x).collect();
    let point = linalg::solve(&ma, &rhs, tau_rank).ok_or(Error::EmptyO)?;
    Ok(AffineSubspace {
        point,
        directions: linalg::nullspace(&ma, tau_rank),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Point,
    Segment,
    Triangle,
    Quadrilateral,
    FullSimplex,
    /// Any other polytope (only possible for n > 3).
    Polytope,
}

/// `G = O ∩ S` by its vertices.
#[derive(Clone, Debug)]
pub struct RestrictionPolytope<S> {
    vertices: Vec<Vector<S>>,
    active_sets: Vec<IndexSet>,
    dim: usize,
    shape: Shape,
}

impl<S: Scalar> RestrictionPolytope<S> {
    /// Vertices; in cyclic order when `dim == 2`.
    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    /// `I(o_i)` per vertex.
    pub fn active_sets(&self) -> &[IndexSet] {
        &self.active_sets
    }

    /// Intrinsic dimension `kappa`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn contains_vertex(&self, k: usize) -> bool {
        self.active_sets.iter().any(|s| *s == IndexSet::from_iter([k]))
    }

    /// Rebuilds a polytope from known vertices (used when reading reports).
    pub fn from_vertices(simplex: &Simplex<S>, vertices: Vec<Vector<S>>, tol: &Tolerances) -> Result<Self> {
        build_polytope(simplex, vertices, tol)
    }
}

/// Vertices of `O ∩ S`, found face by face: on each face `F` solve for the
/// barycentric weights `beta` (supported on `F`, summing to one) with
/// `M (A x + a) = 0`; a unique solution inside `F` is an extreme point.
pub fn restriction_polytope<S: Scalar>(
    sys: &AffineControlSystem<S>,
    simplex: &Simplex<S>,
    tol: &Tolerances,
) -> Result<RestrictionPolytope<S>> {
    let n = simplex.dim();
    if sys.dim() != n {
        return Err(Error::Dimension(format!(
            "system has dimension {}, simplex {}",
            sys.dim(),
            n
        )));
    }
    // Fail early on an empty O.
    equilibrium_subspace(sys, tol.rank)?;

    let m = sys.annihilator();
    // Column i: M (A v_i + a).
    let residuals: Vec<Vector<S>> = simplex
        .vertices()
        .iter()
        .map(|v| m.mul_vec(&sys.drift(v)))
        .collect();

    let mut faces: Vec<u64> = (1..(1u64 << (n + 1))).collect();
    faces.sort_by_key(|f| (f.count_ones(), *f));

    let geo = tol.geo * simplex.diameter().max(f64::MIN_POSITIVE);
    let mut found: Vec<Vector<S>> = Vec::new();
    for face in faces {
        let support: Vec<usize> = (0..=n).filter(|i| face & (1 << i) != 0).collect();
        let mut rows: Vec<Vector<S>> = (0..m.rows())
            .map(|r| support.iter().map(|&i| residuals[i][r].clone()).collect())
            .collect();
        rows.push(vec![S::one(); support.len()]);
        let mut rhs = linalg::zeros(m.rows());
        rhs.push(S::one());
        let coeffs = Matrix::from_rows(&rows, support.len());
        if linalg::rank(&coeffs, tol.rank) < support.len() {
            continue;
        }
        let Some(beta) = linalg::solve(&coeffs, &rhs, tol.rank) else {
            continue;
        };
        if beta.iter().any(|b| crate::scalar::is_negative(b, tol.bary, 1.0)) {
            continue;
        }
        let mut weights = linalg::zeros(n + 1);
        for (&i, b) in support.iter().zip(beta) {
            weights[i] = if b.is_negative() { S::zero() } else { b };
        }
        let x = simplex.from_barycentric(&weights);
        let duplicate = found.iter().any(|p| {
            if S::EXACT {
                *p == x
            } else {
                linalg::norm2_f64(&sub(p, &x)) <= geo
            }
        });
        if !duplicate {
            found.push(x);
        }
    }
    if found.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    build_polytope(simplex, found, tol)
}

fn build_polytope<S: Scalar>(simplex: &Simplex<S>, vertices: Vec<Vector<S>>, tol: &Tolerances) -> Result<RestrictionPolytope<S>> {
    let n = simplex.dim();
    let independent = linalg::affinely_independent_subset(&vertices, tol.rank);
    let dim = independent.len().saturating_sub(1);
    let vertices = if dim == 2 && vertices.len() > 3 {
        cyclic_order(vertices, &independent, tol.rank)?
    } else {
        vertices
    };
    let shape = match (dim, vertices.len()) {
        (0, _) => Shape::Point,
        (d, _) if d == n => Shape::FullSimplex,
        (1, _) => Shape::Segment,
        (2, 3) => Shape::Triangle,
        (2, 4) => Shape::Quadrilateral,
        _ => Shape::Polytope,
    };
    if n == 3 && dim == 2 && vertices.len() > 4 {
        return Err(Error::InternalInvariantBroken(format!(
            "plane section of a tetrahedron with {} vertices",
            vertices.len()
        )));
    }
    let active_sets = vertices
        .iter()
        .map(|o| simplex.active_index_set(o, tol.bary))
        .collect::<Result<Vec<_>>>()?;
    Ok(RestrictionPolytope {
        vertices,
        active_sets,
        dim,
        shape,
    })
}

/// Sorts coplanar points by angle around their centroid, using exact
/// coordinates in the plane spanned by the first affinely independent triple.
fn cyclic_order<S: Scalar>(points: Vec<Vector<S>>, independent: &[usize], tau: f64) -> Result<Vec<Vector<S>>> {
    let frame: Vec<Vector<S>> = independent.iter().map(|&i| points[i].clone()).collect();
    let mut planar: Vec<(S, S)> = Vec::with_capacity(points.len());
    for p in &points {
        let w = linalg::affine_coordinates(&frame, p, tau).ok_or_else(|| {
            Error::InternalInvariantBroken("polygon vertex off its own plane".into())
        })?;
        planar.push((w[1].clone(), w[2].clone()));
    }
    let count = S::from_i64(planar.len() as i64);
    let cx = planar.iter().fold(S::zero(), |acc, p| acc + p.0.clone()) / count.clone();
    let cy = planar.iter().fold(S::zero(), |acc, p| acc + p.1.clone()) / count;
    let rel: Vec<(S, S)> = planar
        .into_iter()
        .map(|(x, y)| (x - cx.clone(), y - cy.clone()))
        .collect();
    // Upper half-plane first, then by cross product.
    let half = |p: &(S, S)| p.1.is_negative() || (p.1.is_zero() && p.0.is_negative());
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&rel[i], &rel[j]);
        half(a).cmp(&half(b)).then_with(|| {
            let cross = a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone();
            S::zero().partial_cmp(&cross).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(order.into_iter().map(|i| points[i].clone()).collect())
}

/// Case tags of the affine obstruction taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "DIM0")]
    Dim0,
    #[serde(rename = "V0_IN_G")]
    V0InG,
    #[serde(rename = "DIMN")]
    DimN,
    #[serde(rename = "N2_D1B1")]
    N2D1B1,
    #[serde(rename = "N3_D1B1")]
    N3D1B1,
    #[serde(rename = "N3_D1B2")]
    N3D1B2,
    #[serde(rename = "N3_D2B1")]
    N3D2B1,
    #[serde(rename = "N3_D2B2_SYM_TRI")]
    N3D2B2SymTri,
    #[serde(rename = "N3_D2B2_EDGE_TRI")]
    N3D2B2EdgeTri,
    #[serde(rename = "N3_D2B2_VERTEX_TRI")]
    N3D2B2VertexTri,
    #[serde(rename = "N3_D2B2_QUAD")]
    N3D2B2Quad,
    #[serde(rename = "UNSUPPORTED")]
    Unsupported,
}

impl CaseTag {
    pub const ALL: [CaseTag; 12] = [
        CaseTag::Dim0,
        CaseTag::V0InG,
        CaseTag::DimN,
        CaseTag::N2D1B1,
        CaseTag::N3D1B1,
        CaseTag::N3D1B2,
        CaseTag::N3D2B1,
        CaseTag::N3D2B2SymTri,
        CaseTag::N3D2B2EdgeTri,
        CaseTag::N3D2B2VertexTri,
        CaseTag::N3D2B2Quad,
        CaseTag::Unsupported,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Dim0 => "DIM0",
            CaseTag::V0InG => "V0_IN_G",
            CaseTag::DimN => "DIMN",
            CaseTag::N2D1B1 => "N2_D1B1",
            CaseTag::N3D1B1 => "N3_D1B1",
            CaseTag::N3D1B2 => "N3_D1B2",
            CaseTag::N3D2B1 => "N3_D2B1",
            CaseTag::N3D2B2SymTri => "N3_D2B2_SYM_TRI",
            CaseTag::N3D2B2EdgeTri => "N3_D2B2_EDGE_TRI",
            CaseTag::N3D2B2VertexTri => "N3_D2B2_VERTEX_TRI",
            CaseTag::N3D2B2Quad => "N3_D2B2_QUAD",
            CaseTag::Unsupported => "UNSUPPORTED",
        }
    }

    /// Arms where solvability is equivalent to `cone(G) ∩ Im(B) != {0}`.
    pub fn cone_condition_is_necessary(self) -> bool {
        matches!(
            self,
            CaseTag::Dim0
                | CaseTag::V0InG
                | CaseTag::DimN
                | CaseTag::N2D1B1
                | CaseTag::N3D1B1
                | CaseTag::N3D2B1
                | CaseTag::N3D2B2SymTri
                | CaseTag::N3D2B2EdgeTri
        )
    }

    /// Arms that always admit an affine selector.
    pub fn always_feasible(self) -> bool {
        matches!(
            self,
            CaseTag::N3D1B2 | CaseTag::N3D2B2VertexTri | CaseTag::N3D2B2Quad
        )
    }

    /// Tags reachable for ambient dimension `n`.
    pub fn valid_for(self, n: usize) -> bool {
        match self {
            CaseTag::Dim0 | CaseTag::V0InG | CaseTag::DimN => n >= 1,
            CaseTag::N2D1B1 => n == 2,
            CaseTag::Unsupported => n > 3,
            _ => n == 3,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unsupported(format!("unknown case tag {s:?}")))
    }
}

/// A case tag plus the relabeling that puts the instance in canonical position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub tag: CaseTag,
    /// `permutation[c]` is the actual simplex index playing canonical role `c`;
    /// `permutation[0] == 0` always.
    pub permutation: Vec<usize>,
    /// `vertex_order[i]` is the index into `G.vertices()` of canonical `o_{i+1}`.
    pub vertex_order: Vec<usize>,
    /// Tolerance-sensitive observations (float mode only).
    pub flags: Vec<String>,
}

impl CaseLabel {
    fn plain(tag: CaseTag, n: usize, r: usize) -> Self {
        Self {
            tag,
            permutation: (0..=n).collect(),
            vertex_order: (0..r).collect(),
            flags: Vec::new(),
        }
    }

    /// Exchanges canonical roles 2 and 3 together with `o1 <-> o2`, `o3 <-> o4`.
    /// The canonical quadrilateral configuration is symmetric under this swap.
    pub fn swap_quadrilateral_roles(&self) -> Self {
        let p = &self.permutation;
        let v = &self.vertex_order;
        Self {
            tag: self.tag,
            permutation: vec![p[0], p[1], p[3], p[2]],
            vertex_order: vec![v[1], v[0], v[3], v[2]],
            flags: self.flags.clone(),
        }
    }
}

/// Assigns the case tag. Precedence: `DIM0`, `DIMN`, `V0_IN_G`, then the
/// dimension-specific arms. `dim_b` of 0 is treated like 1 (both sides of the
/// cone condition are then trivially false).
pub fn classify<S: Scalar>(
    g: &RestrictionPolytope<S>,
    simplex: &Simplex<S>,
    dim_b: usize,
    tol: &Tolerances,
) -> Result<CaseLabel> {
    let n = simplex.dim();
    let r = g.vertices().len();
    let mut label = classify_inner(g, n, dim_b)?;
    if !S::EXACT {
        for (i, o) in g.vertices().iter().enumerate() {
            if simplex.near_face(o, tol.bary) {
                label.flags.push(format!(
                    "vertex {i} has a barycentric coordinate within 10*tau_bary of zero"
                ));
            }
        }
    }
    debug_assert_eq!(label.vertex_order.len(), r);
    Ok(label)
}

fn classify_inner<S: Scalar>(g: &RestrictionPolytope<S>, n: usize, dim_b: usize) -> Result<CaseLabel> {
    let kappa = g.dim();
    let r = g.vertices().len();
    let plain = |tag| Ok(CaseLabel::plain(tag, n, r));
    if kappa == 0 {
        return plain(CaseTag::Dim0);
    }
    if kappa == n {
        return plain(CaseTag::DimN);
    }
    if g.contains_vertex(0) {
        return plain(CaseTag::V0InG);
    }
    match (n, kappa, dim_b) {
        (2, 1, 0..=1) => plain(CaseTag::N2D1B1),
        (3, 1, 0..=1) => plain(CaseTag::N3D1B1),
        (3, 1, 2) => plain(CaseTag::N3D1B2),
        (3, 2, 0..=1) => plain(CaseTag::N3D2B1),
        (3, 2, 2) => classify_plane_section(g),
        (n, _, _) if n > 3 => plain(CaseTag::Unsupported),
        _ => Err(Error::Unsupported(format!(
            "n = {n}, dim G = {kappa}, dim B = {dim_b} is not a consistent configuration"
        ))),
    }
}

/// The four `n = 3`, `dim G = dim B = 2` shapes, with canonical relabeling.
fn classify_plane_section<S: Scalar>(g: &RestrictionPolytope<S>) -> Result<CaseLabel> {
    let sets = g.active_sets();
    let tag_with = |tag, permutation: Vec<usize>, vertex_order: Vec<usize>| CaseLabel {
        tag,
        permutation,
        vertex_order,
        flags: Vec::new(),
    };
    let find = |want: IndexSet| sets.iter().position(|s| *s == want);
    let pair = |a: usize, b: usize| IndexSet::from_iter([a, b]);

    if sets.len() == 3 {
        // o_i in (v_0, v_i] for i = 1, 2, 3.
        let sym: Option<Vec<usize>> = (1..=3)
            .map(|k| find(pair(0, k)).or_else(|| find(IndexSet::from_iter([k]))))
            .collect();
        if let Some(order) = sym {
            if distinct(&order) {
                return Ok(tag_with(CaseTag::N3D2B2SymTri, vec![0, 1, 2, 3], order));
            }
        }

        // Exactly one simplex vertex v_k; o2 in co{v0, v_c}, o3 in co{v_c, v_e}.
        let at_vertex: Vec<usize> = (0..3).filter(|&i| sets[i].len() == 1).collect();
        if let [i1] = at_vertex[..] {
            let k = sets[i1].iter().next().expect("singleton");
            for c in (1..=3).filter(|&c| c != k) {
                let e = 6 - k - c;
                if let (Some(i2), Some(i3)) = (find(pair(0, c)), find(pair(c, e))) {
                    return Ok(tag_with(CaseTag::N3D2B2VertexTri, vec![0, k, c, e], vec![i1, i2, i3]));
                }
            }
        }

        // All three on edges incident to a common v_k, k != 0.
        for k in 1..=3 {
            let others: Vec<usize> = (1..=3).filter(|&j| j != k).collect();
            let (a, b) = (others[0], others[1]);
            if let (Some(i1), Some(i2), Some(i3)) = (find(pair(k, a)), find(pair(0, k)), find(pair(k, b))) {
                return Ok(tag_with(CaseTag::N3D2B2EdgeTri, vec![0, k, a, b], vec![i1, i2, i3]));
            }
        }
        return Err(Error::AmbiguousClassification(format!(
            "triangle with active sets {sets:?} matches no canonical configuration"
        )));
    }

    if sets.len() == 4 {
        // {v0, v_p} separated from {v_s, v_t}.
        for p in 1..=3 {
            let others: Vec<usize> = (1..=3).filter(|&j| j != p).collect();
            let (s, t) = (others[0], others[1]);
            let order = [pair(0, s), pair(0, t), pair(p, s), pair(p, t)]
                .into_iter()
                .map(find)
                .collect::<Option<Vec<usize>>>();
            if let Some(order) = order {
                return Ok(tag_with(CaseTag::N3D2B2Quad, vec![0, p, s, t], order));
            }
        }
        return Err(Error::AmbiguousClassification(format!(
            "quadrilateral with active sets {sets:?} matches no canonical configuration"
        )));
    }

    Err(Error::InternalInvariantBroken(format!(
        "planar section with {} vertices",
        sets.len()
    )))
}

fn distinct(v: &[usize]) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| a != b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn mat(rows: &[&[(i64, i64)]], cols: usize) -> Matrix<Rational> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| q(n, d)).collect())
            .collect();
        Matrix::from_rows(&rows, cols)
    }

    fn unit_simplex(n: usize) -> Simplex<Rational> {
        let mut vs = vec![vec![q(0, 1); n]];
        for i in 0..n {
            let mut v = vec![q(0, 1); n];
            v[i] = q(1, 1);
            vs.push(v);
        }
        Simplex::new(vs, 0.0).unwrap()
    }

    /// A = I, a = (0, -1/4), B = (1, 0)^T: O = { x_2 = 1/4 }.
    fn planar_example() -> AffineControlSystem<Rational> {
        AffineControlSystem::new(
            mat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], 2),
            mat(&[&[(1, 1)], &[(0, 1)]], 1),
            vec![q(0, 1), q(-1, 4)],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn derived_input_data() {
        let sys = planar_example();
        assert_eq!(sys.input_dim(), 1);
        assert_eq!(sys.annihilator().rows(), 1);
        assert!(sys.in_input_space(&[q(3, 1), q(0, 1)], 0.0));
        assert!(!sys.in_input_space(&[q(0, 1), q(1, 1)], 0.0));
        // Redundant columns do not inflate the basis.
        let sys = AffineControlSystem::new(
            Matrix::identity(2),
            mat(&[&[(1, 1), (2, 1)], &[(1, 1), (2, 1)]], 2),
            vec![q(0, 1); 2],
            0.0,
        )
        .unwrap();
        assert_eq!(sys.input_dim(), 1);
        assert_eq!(sys.input_basis()[0], vec![q(1, 1), q(1, 1)]);
    }

    #[test]
    fn equilibrium_line() {
        let o = equilibrium_subspace(&planar_example(), 0.0).unwrap();
        assert_eq!(o.dim(), 1);
        assert_eq!(o.point[1], q(1, 4));
        assert_eq!(o.directions[0][1], q(0, 1));
    }

    #[test]
    fn full_rank_input_gives_whole_space() {
        let sys = AffineControlSystem::new(Matrix::identity(2), Matrix::identity(2), vec![q(1, 1), q(2, 1)], 0.0)
            .unwrap();
        assert_eq!(equilibrium_subspace(&sys, 0.0).unwrap().dim(), 2);
        let g = restriction_polytope(&sys, &unit_simplex(2), &Tolerances::default()).unwrap();
        assert_eq!(g.shape(), Shape::FullSimplex);
        assert_eq!(g.vertices().len(), 3);
    }

    #[test]
    fn empty_equilibrium_set() {
        // A = 0, a = (0, 1) not in span{(1, 0)}.
        let sys = AffineControlSystem::new(
            Matrix::zeros(2, 2),
            mat(&[&[(1, 1)], &[(0, 1)]], 1),
            vec![q(0, 1), q(1, 1)],
            0.0,
        )
        .unwrap();
        assert_eq!(equilibrium_subspace(&sys, 0.0).unwrap_err(), Error::EmptyO);
    }

    #[test]
    fn segment_in_unit_triangle() {
        let simplex = unit_simplex(2);
        let g = restriction_polytope(&planar_example(), &simplex, &Tolerances::default()).unwrap();
        assert_eq!(g.shape(), Shape::Segment);
        assert_eq!(g.dim(), 1);
        let mut vs = g.vertices().to_vec();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(vs, vec![vec![q(0, 1), q(1, 4)], vec![q(3, 4), q(1, 4)]]);
        let label = classify(&g, &simplex, 1, &Tolerances::default()).unwrap();
        assert_eq!(label.tag, CaseTag::N2D1B1);
    }

    #[test]
    fn line_missing_simplex() {
        let sys = AffineControlSystem::new(
            Matrix::identity(2),
            mat(&[&[(1, 1)], &[(0, 1)]], 1),
            vec![q(0, 1), q(-2, 1)],
            0.0,
        )
        .unwrap();
        let err = restriction_polytope(&sys, &unit_simplex(2), &Tolerances::default()).unwrap_err();
        assert_eq!(err, Error::EmptyIntersection);
    }

    /// B spans a plane with annihilator `normal`; O = { normal . x = offset }
    /// by taking A = I and a = -offset * normal / |normal|^2.
    fn plane_system(normal: [i64; 3], offset: Rational) -> AffineControlSystem<Rational> {
        let nv: Vec<Rational> = normal.iter().map(|&x| q(x, 1)).collect();
        let basis = linalg::nullspace(&Matrix::from_rows(std::slice::from_ref(&nv), 3), 0.0);
        let b = Matrix::from_columns(&basis, 3);
        let nn = dot(&nv, &nv);
        let a: Vec<Rational> = nv.iter().map(|x| -x.clone() * offset.clone() / nn.clone()).collect();
        AffineControlSystem::new(Matrix::identity(3), b, a, 0.0).unwrap()
    }

    #[test]
    fn symmetric_triangle_through_midpoints() {
        // x + y + z = 1/2 cuts each edge v0 v_i at its midpoint.
        let simplex = unit_simplex(3);
        let sys = plane_system([1, 1, 1], q(1, 2));
        let tol = Tolerances::default();
        let g = restriction_polytope(&sys, &simplex, &tol).unwrap();
        assert_eq!(g.shape(), Shape::Triangle);
        let label = classify(&g, &simplex, sys.input_dim(), &tol).unwrap();
        assert_eq!(label.tag, CaseTag::N3D2B2SymTri);
        assert_eq!(label.permutation, vec![0, 1, 2, 3]);
        for (i, &vi) in label.vertex_order.iter().enumerate() {
            let mut want = vec![q(0, 1); 3];
            want[i] = q(1, 2);
            assert_eq!(g.vertices()[vi], want);
        }
    }

    #[test]
    fn triangle_through_vertex_v1() {
        // x + 2y = 1 meets S in v1, (0, 1/2, 0) and (0, 1/2, 1/2).
        let simplex = unit_simplex(3);
        let sys = plane_system([1, 2, 0], q(1, 1));
        let tol = Tolerances::default();
        let g = restriction_polytope(&sys, &simplex, &tol).unwrap();
        assert_eq!(g.shape(), Shape::Triangle);
        let label = classify(&g, &simplex, 2, &tol).unwrap();
        assert_eq!(label.tag, CaseTag::N3D2B2VertexTri);
        assert_eq!(label.permutation, vec![0, 1, 2, 3]);
        assert_eq!(g.vertices()[label.vertex_order[0]], simplex.vertex(1));
    }

    #[test]
    fn quadrilateral_is_cyclic_and_canonical() {
        // x + y = 1/2 separates {v0, v3} from {v1, v2}.
        let simplex = unit_simplex(3);
        let sys = plane_system([1, 1, 0], q(1, 2));
        let tol = Tolerances::default();
        let g = restriction_polytope(&sys, &simplex, &tol).unwrap();
        assert_eq!(g.shape(), Shape::Quadrilateral);
        let label = classify(&g, &simplex, 2, &tol).unwrap();
        assert_eq!(label.tag, CaseTag::N3D2B2Quad);
        assert_eq!(label.permutation, vec![0, 3, 1, 2]);
        // Consecutive vertices must share a facet of the simplex (cyclic order).
        let sets = g.active_sets();
        for i in 0..4 {
            let (a, b) = (sets[i], sets[(i + 1) % 4]);
            assert_eq!(a.intersection(b).len(), 1, "{a:?} {b:?}");
        }
    }

    #[test]
    fn precedence_of_dimension_arms() {
        let simplex = unit_simplex(3);
        let tol = Tolerances::default();
        // Plane through v0: x = y.
        let sys = plane_system([1, -1, 0], q(0, 1));
        let g = restriction_polytope(&sys, &simplex, &tol).unwrap();
        assert_eq!(classify(&g, &simplex, 2, &tol).unwrap().tag, CaseTag::V0InG);
        // Plane touching only v1: x = 1.
        let sys = plane_system([1, 0, 0], q(1, 1));
        let g = restriction_polytope(&sys, &simplex, &tol).unwrap();
        assert_eq!(g.shape(), Shape::Point);
        assert_eq!(classify(&g, &simplex, 2, &tol).unwrap().tag, CaseTag::Dim0);
    }

    #[test]
    fn tag_names_round_trip() {
        for t in CaseTag::ALL {
            assert_eq!(t.as_str().parse::<CaseTag>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{t}\""));
        }
        assert!("NOPE".parse::<CaseTag>().is_err());
    }
}
