//! The cone condition `cone(G) ∩ Im(B) != {0}` and the helper constructions
//! that feed the synthesis arms.

use crate::error::{Error, Result};
use crate::geometry::{HalfspaceCone, IndexSet};
use crate::linalg::{self, dot, Matrix, Vector};
use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation};
use crate::scalar::{is_negative, is_positive, Scalar, Tolerances};
use crate::system::in_row_kernel;

/// A nonzero `b in cone ∩ Im(B)` with `|b|_inf = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityWitness<S> {
    pub vector: Vector<S>,
    /// Coordinates of `vector` in the input basis.
    pub basis_coords: Vector<S>,
    /// Cone constraints active at `vector` (`h_j . b == 0`).
    pub active_constraints: IndexSet,
}

/// Evidence that `cone ∩ Im(B) = {0}`: every cone functional attains minimum
/// zero on `cone ∩ Im(B) ∩ box`, and the functionals have no common kernel
/// inside `Im(B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate<S> {
    pub constraints: IndexSet,
    pub input_dim: usize,
    /// `(j, min h_j . b)` over the box-bounded slice.
    pub stage_one_minima: Vec<(usize, S)>,
    /// Rank of the cone functionals restricted to `Im(B)`; equals `input_dim`.
    pub restricted_rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConeCondition<S> {
    Satisfied(FeasibilityWitness<S>),
    Violated(ObstructionCertificate<S>),
}

impl<S> ConeCondition<S> {
    pub fn witness(&self) -> Option<&FeasibilityWitness<S>> {
        match self {
            ConeCondition::Satisfied(w) => Some(w),
            ConeCondition::Violated(_) => None,
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, ConeCondition::Satisfied(_))
    }
}

/// Decides whether `cone ∩ span(basis)` contains a nonzero vector.
///
/// With `b = E u` (`E` the basis matrix) and `g_j = E^T h_j`, stage one
/// minimizes each `g_j . u` over `{ g_i . u <= 0, u in [-1, 1]^d }`; a negative
/// minimum yields a witness. If every minimum is zero the intersection lies in
/// the lineality space `{ g_j . u = 0 for all j }`, which stage two reads off
/// a kernel computation. `basis` may be any spanning set; dependent vectors
/// are dropped first so that a nonzero `u` always gives a nonzero `b`.
pub fn nontrivial_cone_subspace_element<S: Scalar>(
    cone: &HalfspaceCone<S>,
    basis: &[Vector<S>],
    tol: &Tolerances,
) -> Result<ConeCondition<S>> {
    let n = cone.dim();
    if basis.iter().any(|e| e.len() != n) {
        return Err(Error::Dimension("input basis and cone live in different spaces".into()));
    }
    let full = basis.len();
    let pivots = linalg::rref(&Matrix::from_columns(basis, n), tol.rank).pivots;
    let basis: Vec<Vector<S>> = pivots.iter().map(|&k| basis[k].clone()).collect();
    let basis = basis.as_slice();
    let d = basis.len();
    // Coordinates in the caller's spanning set, zero on dropped vectors.
    let satisfied = |mut w: FeasibilityWitness<S>| {
        let mut coords = linalg::zeros(full);
        for (c, &k) in w.basis_coords.iter().zip(&pivots) {
            coords[k] = c.clone();
        }
        w.basis_coords = coords;
        Ok(ConeCondition::Satisfied(w))
    };
    let restricted: Vec<(usize, Vector<S>)> = cone
        .normals()
        .iter()
        .map(|(j, h)| (*j, basis.iter().map(|e| dot(h, e)).collect()))
        .collect();

    let mut minima = Vec::with_capacity(restricted.len());
    if d > 0 {
        // w = u + 1 in [0, 2]^d keeps the program in standard form.
        let mut constraints: Vec<Constraint<S>> = restricted
            .iter()
            .map(|(_, g)| Constraint::new(g.clone(), Relation::Le, sum(g)))
            .collect();
        for k in 0..d {
            let mut unit = linalg::zeros(d);
            unit[k] = S::one();
            constraints.push(Constraint::new(unit, Relation::Le, S::from_i64(2)));
        }
        for (j, g) in &restricted {
            let program = LinearProgram {
                objective: g.clone(),
                constraints: constraints.clone(),
            };
            let (w, value) = match lp::solve(&program, tol.lp)? {
                LpOutcome::Optimal { x, value } => (x, value),
                other => {
                    return Err(Error::LpNumericalFailure(format!(
                        "bounded feasible program reported {other:?}"
                    )))
                }
            };
            let min = value - sum(g);
            let scale: f64 = g.iter().map(|x| x.abs().to_f64()).sum();
            if is_negative(&min, tol.feas, scale) {
                let u: Vector<S> = w.into_iter().map(|x| x - S::one()).collect();
                return satisfied(witness(cone, basis, u, tol));
            }
            minima.push((*j, min));
        }
    }

    let g = Matrix::from_rows(&restricted.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>(), d);
    let kernel = linalg::nullspace(&g, tol.rank);
    if let Some(u) = kernel.into_iter().next() {
        return satisfied(witness(cone, basis, u, tol));
    }
    Ok(ConeCondition::Violated(ObstructionCertificate {
        constraints: cone.constraints(),
        input_dim: d,
        stage_one_minima: minima,
        restricted_rank: linalg::rank(&g, tol.rank),
    }))
}

fn sum<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

fn witness<S: Scalar>(cone: &HalfspaceCone<S>, basis: &[Vector<S>], u: Vector<S>, tol: &Tolerances) -> FeasibilityWitness<S> {
    let b = linalg::combine(&u, basis);
    let norm = linalg::norm_inf(&b);
    let vector = linalg::scale(&b, &(S::one() / norm.clone()));
    let basis_coords = linalg::scale(&u, &(S::one() / norm));
    let nb = linalg::norm2_f64(&vector);
    let active_constraints = cone
        .normals()
        .iter()
        .filter(|(_, h)| !is_negative(&dot(h, &vector), tol.feas, linalg::norm2_f64(h) * nb))
        .map(|(j, _)| *j)
        .collect();
    FeasibilityWitness {
        vector,
        basis_coords,
        active_constraints,
    }
}

/// Independent re-check of a witness: `M b = 0`, `b` in the cone, `|b|_inf = 1`.
pub fn check_witness<S: Scalar>(
    cone: &HalfspaceCone<S>,
    annihilator: &Matrix<S>,
    w: &FeasibilityWitness<S>,
    tol: &Tolerances,
) -> bool {
    let unit = linalg::norm_inf(&w.vector).to_f64();
    in_row_kernel(annihilator, &w.vector, tol.solve)
        && cone.contains(&w.vector, tol.feas)
        && (unit - 1.0).abs() <= if S::EXACT { 0.0 } else { 1e-12 }
}

/// Linearly independent `b1 in C1 ∩ Im(B)`, `b2 in C2 ∩ Im(B)`, for `n = 3`,
/// `dim Im(B) = 2` and cones with at most two constraints each. Both vectors
/// are scaled to unit max-norm.
pub fn independent_cone_vectors<S: Scalar>(
    c1: &HalfspaceCone<S>,
    c2: &HalfspaceCone<S>,
    basis: &[Vector<S>],
    annihilator: &Matrix<S>,
    tol: &Tolerances,
) -> Result<(Vector<S>, Vector<S>)> {
    if c1.dim() != 3 || basis.len() != 2 || annihilator.rows() != 1 {
        return Err(Error::AssumptionViolated(format!(
            "independent cone vectors need n = 3 and dim Im(B) = 2 (got n = {}, dim = {})",
            c1.dim(),
            basis.len()
        )));
    }
    let first = cone_candidates(c1, basis, annihilator, tol)?;
    let second = cone_candidates(c2, basis, annihilator, tol)?;
    let independent = |a: &Vector<S>, b: &Vector<S>| {
        pair_determinant(a, b, basis, tol).is_some_and(|det| is_positive(&det.abs(), tol.indep, 1.0))
    };
    // One of the cones offers two independent candidates unless both meet
    // Im(B) in a single line; then the two lines must differ.
    let pair = if second.len() == 2 {
        let b1 = first[0].clone();
        second
            .iter()
            .find(|b2| independent(&b1, b2))
            .map(|b2| (b1, b2.clone()))
    } else {
        let b2 = second[0].clone();
        first
            .iter()
            .find(|b1| independent(b1, &b2))
            .map(|b1| (b1.clone(), b2))
    };
    let (b1, b2) = pair.ok_or_else(|| {
        Error::AssumptionViolated("both cones meet Im(B) in the same line".into())
    })?;
    Ok((unit_inf(&b1), unit_inf(&b2)))
}

/// Vectors of `C ∩ Im(B)`: two independent ones when available, else the
/// edge direction `ker[h_a; h_b]`.
fn cone_candidates<S: Scalar>(
    cone: &HalfspaceCone<S>,
    basis: &[Vector<S>],
    annihilator: &Matrix<S>,
    tol: &Tolerances,
) -> Result<Vec<Vector<S>>> {
    let normals = cone.normals();
    match normals.len() {
        0 => Ok(basis.to_vec()),
        1 => {
            let h = &normals[0].1;
            Ok(basis
                .iter()
                .map(|e| {
                    if dot(h, e).is_positive() {
                        e.iter().map(|x| -x.clone()).collect()
                    } else {
                        e.clone()
                    }
                })
                .collect())
        }
        2 => {
            let (ha, hb) = (&normals[0].1, &normals[1].1);
            let h = Matrix::from_rows(&[ha.clone(), hb.clone(), annihilator.row(0).to_vec()], 3);
            if let Some(inv) = linalg::inverse(&h, tol.rank) {
                let minus_one = -S::one();
                let y1 = inv.mul_vec(&[minus_one.clone(), S::zero(), S::zero()]);
                let y2 = inv.mul_vec(&[S::zero(), minus_one, S::zero()]);
                Ok(vec![y1, y2])
            } else {
                let edge = Matrix::from_rows(&[ha.clone(), hb.clone()], 3);
                let kernel = linalg::nullspace(&edge, tol.rank);
                match kernel.len() {
                    1 => Ok(kernel),
                    _ => Err(Error::AssumptionViolated(
                        "cone normals are parallel".into(),
                    )),
                }
            }
        }
        k => Err(Error::AssumptionViolated(format!(
            "cone with {k} constraints has no two-dimensional slice"
        ))),
    }
}

/// `det [coords(a) coords(b)]` in the input basis.
pub fn pair_determinant<S: Scalar>(a: &[S], b: &[S], basis: &[Vector<S>], tol: &Tolerances) -> Option<S> {
    if basis.len() != 2 {
        return None;
    }
    let e = Matrix::from_columns(basis, a.len());
    let ca = linalg::solve(&e, &unit_inf(a), tol.rank)?;
    let cb = linalg::solve(&e, &unit_inf(b), tol.rank)?;
    Some(ca[0].clone() * cb[1].clone() - ca[1].clone() * cb[0].clone())
}

fn unit_inf<S: Scalar>(v: &[S]) -> Vector<S> {
    let norm = linalg::norm_inf(v);
    if norm.is_zero() {
        v.to_vec()
    } else {
        linalg::scale(v, &(S::one() / norm))
    }
}

/// `0 in conv(points)`, decided by a phase-one program.
pub fn zero_in_hull<S: Scalar>(points: &[Vector<S>], tol: &Tolerances) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(false);
    };
    let n = first.len();
    let r = points.len();
    let mut constraints: Vec<Constraint<S>> = (0..n)
        .map(|i| {
            let row = points.iter().map(|p| p[i].clone()).collect();
            Constraint::new(row, Relation::Eq, S::zero())
        })
        .collect();
    constraints.push(Constraint::new(vec![S::one(); r], Relation::Eq, S::one()));
    let program = LinearProgram {
        objective: linalg::zeros(r),
        constraints,
    };
    Ok(matches!(lp::solve(&program, tol.lp)?, LpOutcome::Optimal { .. }))
}
