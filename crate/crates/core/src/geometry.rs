//! Simplicial geometry: facet normals, barycentric coordinates, active index
//! sets and the inside-pointing cones built from them.
//!
//! Facet `F_j` is the facet opposite vertex `v_j`; `F_0` is the exit facet.
//! The inside-pointing cone at `x` is
//!
//! ```text
//! C(x) = { y : h_j . y <= 0 for every j in {1..n} \ I(x) }
//! ```
//!
//! where `I(x)` is the set of vertices carrying positive barycentric weight.
//! Because a cone is determined by its constraint set, cone intersection is
//! union of index sets and cone inclusion is reverse set inclusion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot, sub, Matrix, Vector};
use crate::scalar::{is_negative, is_positive, Scalar};

/// Set of vertex indices, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const MAX_INDEX: usize = 63;

    pub fn empty() -> Self {
        Self(0)
    }

    /// `{lo, lo+1, ..., hi}`
    pub fn range(lo: usize, hi: usize) -> Self {
        (lo..=hi).collect()
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i <= Self::MAX_INDEX, "index {i} out of range");
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn contains(self, i: usize) -> bool {
        i <= Self::MAX_INDEX && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..=Self::MAX_INDEX).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = Self::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for IndexSet {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i > Self::MAX_INDEX) {
            return Err(serde::de::Error::custom(format!("index {bad} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}

/// An n-simplex with vertex `v_0` opposite the exit facet.
#[derive(Clone, Debug)]
pub struct Simplex<S> {
    vertices: Vec<Vector<S>>,
    normals: Vec<Vector<S>>,
    diameter: f64,
}

impl<S: Scalar> Simplex<S> {
    /// Builds the simplex and derives its facet normals. `tau_rank` is only
    /// used by the floating-point backend.
    pub fn new(vertices: Vec<Vector<S>>, tau_rank: f64) -> Result<Self> {
        let normals = facet_normals(&vertices, tau_rank)?;
        let diameter = vertices
            .iter()
            .flat_map(|a| vertices.iter().map(move |b| linalg::norm2_f64(&sub(a, b))))
            .fold(0.0, f64::max);
        Ok(Self {
            vertices,
            normals,
            diameter,
        })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vector<S>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[S] {
        &self.vertices[i]
    }

    /// Outward normal `h_j` of facet `F_j`. Not normalized.
    pub fn normal(&self, j: usize) -> &[S] {
        &self.normals[j]
    }

    pub fn normals(&self) -> &[Vector<S>] {
        &self.normals
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Barycentric coordinates `alpha_0..alpha_n` of `x` (which may lie outside).
    ///
    /// With `h_j = -(row j of E^-1)` for the edge matrix `E = [v_i - v_0]`,
    /// `alpha_j = -h_j . (x - v_0)` for `j >= 1`.
    pub fn barycentric(&self, x: &[S]) -> Vector<S> {
        let d = sub(x, &self.vertices[0]);
        let mut alpha: Vector<S> = Vec::with_capacity(self.vertices.len());
        alpha.push(S::one());
        for j in 1..self.vertices.len() {
            let a = -dot(&self.normals[j], &d);
            alpha[0] = alpha[0].clone() - a.clone();
            alpha.push(a);
        }
        alpha
    }

    /// `sum alpha_i v_i`
    pub fn from_barycentric(&self, alpha: &[S]) -> Vector<S> {
        linalg::combine(alpha, &self.vertices)
    }

    pub fn contains(&self, x: &[S], tau_bary: f64) -> bool {
        self.barycentric(x)
            .iter()
            .all(|a| !is_negative(a, tau_bary, 1.0))
    }

    /// `I(x) = { i : alpha_i(x) > tau_bary }`.
    pub fn active_index_set(&self, x: &[S], tau_bary: f64) -> Result<IndexSet> {
        let alpha = self.barycentric(x);
        if let Some((i, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| is_negative(*a, tau_bary, 1.0))
        {
            return Err(Error::PointOutsideSimplex {
                coordinate: i,
                value: a.to_f64(),
            });
        }
        Ok(alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| is_positive(*a, tau_bary, 1.0))
            .map(|(i, _)| i)
            .collect())
    }

    /// `true` if some barycentric coordinate sits in `(0, 10 tau_bary)`, i.e.
    /// the active set depends on the tolerance. Always `false` in exact mode.
    pub fn near_face(&self, x: &[S], tau_bary: f64) -> bool {
        !S::EXACT
            && self
                .barycentric(x)
                .iter()
                .any(|a| a.to_f64() > 0.0 && a.to_f64() < 10.0 * tau_bary)
    }

    /// The inside-pointing cone `C(x)`.
    pub fn tangent_cone(&self, x: &[S], tau_bary: f64) -> Result<HalfspaceCone<S>> {
        let active = self.active_index_set(x, tau_bary)?;
        Ok(self.cone_from_active(active))
    }

    /// Cone whose constraints are `{1..n} \ active`.
    pub fn cone_from_active(&self, active: IndexSet) -> HalfspaceCone<S> {
        let constraints = IndexSet::range(1, self.dim()).difference(active);
        self.cone_with_constraints(constraints)
    }

    pub fn cone_with_constraints(&self, constraints: IndexSet) -> HalfspaceCone<S> {
        assert!(!constraints.contains(0), "the exit facet never constrains C(x)");
        HalfspaceCone {
            dim: self.dim(),
            constraints,
            normals: constraints
                .iter()
                .map(|j| (j, self.normals[j].clone()))
                .collect(),
        }
    }

    /// `cone(G)` for the polytope with the given vertices: the intersection of
    /// the vertex cones, which equals the intersection over all of `G`.
    pub fn cone_of_polytope(&self, vertices: &[Vector<S>], tau_bary: f64) -> Result<HalfspaceCone<S>> {
        let mut constraints = IndexSet::empty();
        for o in vertices {
            constraints = constraints.union(self.tangent_cone(o, tau_bary)?.constraints);
        }
        Ok(self.cone_with_constraints(constraints))
    }

    /// Index `k` if `x` is the simplex vertex `v_k`.
    pub fn vertex_index(&self, x: &[S], tau_bary: f64) -> Option<usize> {
        let active = self.active_index_set(x, tau_bary).ok()?;
        (active.len() == 1).then(|| active.iter().next().expect("one element"))
    }
}

/// Outward facet normals `h_0..h_n` for the simplex with the given vertices.
pub fn facet_normals<S: Scalar>(vertices: &[Vector<S>], tau_rank: f64) -> Result<Vec<Vector<S>>> {
    let n = vertices.len().checked_sub(1).ok_or(Error::DegenerateSimplex)?;
    if n == 0 || vertices.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "a simplex in R^n needs n+1 points of length n, got {} points",
            vertices.len()
        )));
    }
    let edges: Vec<Vector<S>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
    let edge_matrix = Matrix::from_columns(&edges, n);
    let inv = linalg::inverse(&edge_matrix, tau_rank).ok_or(Error::DegenerateSimplex)?;
    let mut normals = Vec::with_capacity(n + 1);
    let mut h0 = linalg::zeros(n);
    for j in 0..n {
        h0 = linalg::add(&h0, inv.row(j));
    }
    normals.push(h0);
    for j in 0..n {
        normals.push(inv.row(j).iter().map(|x| -x.clone()).collect());
    }
    Ok(normals)
}

/// `{ y : h_j . y <= 0, j in constraints }`. An empty constraint set is R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceCone<S> {
    dim: usize,
    constraints: IndexSet,
    normals: Vec<(usize, Vector<S>)>,
}

impl<S: Scalar> HalfspaceCone<S> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> IndexSet {
        self.constraints
    }

    /// `(j, h_j)` pairs in increasing `j`.
    pub fn normals(&self) -> &[(usize, Vector<S>)] {
        &self.normals
    }

    /// Membership with slack `tau_feas * |h_j| * |y|` per constraint.
    pub fn contains(&self, y: &[S], tau_feas: f64) -> bool {
        let ny = linalg::norm2_f64(y);
        self.normals.iter().all(|(_, h)| {
            let scale = linalg::norm2_f64(h) * ny;
            !is_positive(&dot(h, y), tau_feas, scale)
        })
    }

    /// Largest normalized constraint value `max_j h_j . y / |h_j|`
    /// (`-inf` when unconstrained). Positive means `y` is outside.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|(_, h)| {
                let h = linalg::to_f64_vec(h);
                dot(&h, y) / linalg::norm2_f64(&h)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Intersection: the union of both constraint sets.
    pub fn intersect(&self, other: &Self) -> Self {
        let mut normals = self.normals.clone();
        for (j, h) in &other.normals {
            if !self.constraints.contains(*j) {
                normals.push((*j, h.clone()));
            }
        }
        normals.sort_by_key(|(j, _)| *j);
        Self {
            dim: self.dim,
            constraints: self.constraints.union(other.constraints),
            normals,
        }
    }
}

/// `c1 ⊆ c2`, decided on constraint sets: `J(c2) ⊆ J(c1)`.
pub fn cone_inclusion<S: Scalar>(c1: &HalfspaceCone<S>, c2: &HalfspaceCone<S>) -> bool {
    c2.constraints.is_subset(c1.constraints)
}
