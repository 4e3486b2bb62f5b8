//! Independent checks of a synthesized law. Nothing here trusts the
//! construction that produced the law: conditions are re-derived from the
//! simplex, the system and the vertex values alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::feasibility::zero_in_hull;
use crate::geometry::Simplex;
use crate::law::AffineLaw;
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::{is_positive, Scalar, Tolerances};
use crate::system::{in_row_kernel, AffineControlSystem, RestrictionPolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn from_checks(checks: Vec<Check>) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &str, failures: Vec<String>) -> Check {
    Check {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: failures.join("; "),
    }
}

/// Verifies that `law` is an affine selector solving the problem on `G`:
/// its domain is `G`, `f(o_i) in Im(B) ∩ C(o_i)` at every vertex, the vertex
/// values do not have zero in their convex hull, and the values are consistent
/// with a single affine map.
pub fn check_certificate<S: Scalar>(
    simplex: &Simplex<S>,
    sys: &AffineControlSystem<S>,
    law: &AffineLaw<S>,
    g: &RestrictionPolytope<S>,
    tol: &Tolerances,
) -> Result<Report> {
    let geo = tol.geo * simplex.diameter();
    let same = |a: &Vector<S>, b: &Vector<S>| {
        if S::EXACT {
            a == b
        } else {
            linalg::norm2_f64(&linalg::sub(a, b)) <= geo
        }
    };
    let mut missing = Vec::new();
    for (i, o) in g.vertices().iter().enumerate() {
        if !law.vertices().iter().any(|p| same(p, o)) {
            missing.push(format!("vertex {i} of G has no value"));
        }
    }
    for (i, p) in law.vertices().iter().enumerate() {
        if !g.vertices().iter().any(|o| same(p, o)) {
            missing.push(format!("law vertex {i} is not a vertex of G"));
        }
    }
    let mut checks = vec![check("domain", missing)];
    checks.extend(check_vertex_values(simplex, sys.annihilator(), law, tol)?.checks);
    Ok(Report::from_checks(checks))
}

/// The vertex conditions of [`check_certificate`] without the domain check.
pub fn check_vertex_values<S: Scalar>(
    simplex: &Simplex<S>,
    annihilator: &Matrix<S>,
    law: &AffineLaw<S>,
    tol: &Tolerances,
) -> Result<Report> {
    let mut membership = Vec::new();
    let mut cones = Vec::new();
    for (i, (o, f)) in law.vertices().iter().zip(law.values()).enumerate() {
        if !in_row_kernel(annihilator, f, tol.solve) {
            membership.push(format!("f(o_{i}) is not in Im(B)"));
        }
        let cone = simplex.tangent_cone(o, tol.bary)?;
        if !cone.contains(f, tol.feas) {
            cones.push(format!("f(o_{i}) leaves C(o_{i})"));
        }
    }
    let nonvanishing = if zero_in_hull(law.values(), tol)? {
        vec!["0 lies in the convex hull of the vertex values".to_string()]
    } else {
        Vec::new()
    };

    let mut consistency = Vec::new();
    let independent = law.independent();
    let points: Vec<Vector<S>> = independent.iter().map(|&i| law.vertices()[i].clone()).collect();
    let values: Vec<Vector<S>> = independent.iter().map(|&i| law.values()[i].clone()).collect();
    for i in (0..law.vertices().len()).filter(|i| !independent.contains(i)) {
        let Some(w) = linalg::affine_coordinates(&points, &law.vertices()[i], tol.rank) else {
            consistency.push(format!("o_{i} leaves the affine hull of G"));
            continue;
        };
        let predicted = linalg::combine(&w, &values);
        let gap = linalg::norm_inf(&linalg::sub(&predicted, &law.values()[i]));
        let scale = 1f64.max(linalg::norm2_f64(&predicted));
        if is_positive(&gap, tol.solve, scale) {
            consistency.push(format!("f(o_{i}) disagrees with the affine extension"));
        }
    }

    Ok(Report::from_checks(vec![
        check("input_space", membership),
        check("vertex_cones", cones),
        check("nonvanishing", nonvanishing),
        check("affine_consistency", consistency),
    ]))
}

/// Samples `samples` points of `G` (interior and lower-dimensional faces) in
/// `f64` and checks `f(x) in C(x)` and `|f(x)| >= tau_nonzero * max |f(o_i)|`.
pub fn sample_check<S: Scalar>(
    simplex: &Simplex<S>,
    law: &AffineLaw<S>,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Report> {
    let simplex = to_f64_simplex(simplex)?;
    let law = law.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = law.vertices().len();
    let peak = law
        .values()
        .iter()
        .map(|v| linalg::norm2_f64(v))
        .fold(0.0, f64::max);
    let mut cone_failures = 0usize;
    let mut small = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let mut weights: Vec<f64> = (0..r).map(|_| Exp1.sample(&mut rng)).collect();
        if rng.gen_bool(0.5) {
            // Restrict to a random face of G.
            let keep = rng.gen_range(0..r);
            for (i, w) in weights.iter_mut().enumerate() {
                if i != keep && rng.gen_bool(0.5) {
                    *w = 0.0;
                }
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let x = linalg::combine(&weights, law.vertices());
        let fx = linalg::combine(&weights, law.values());
        let cone = simplex.tangent_cone(&x, tol.bary)?;
        let violation = cone.max_violation(&fx);
        if !cone.contains(&fx, tol.feas) {
            cone_failures += 1;
            worst = worst.max(violation);
        }
        if linalg::norm2_f64(&fx) < tol.nonzero * peak {
            small += 1;
        }
    }
    let mut cone_detail = Vec::new();
    if cone_failures > 0 {
        cone_detail.push(format!("{cone_failures} of {samples} samples leave C(x), worst {worst:e}"));
    }
    let mut zero_detail = Vec::new();
    if small > 0 {
        zero_detail.push(format!("{small} of {samples} samples have f(x) near 0"));
    }
    let mut checks = vec![
        check("sampled_cones", cone_detail),
        check("sampled_nonvanishing", zero_detail),
    ];
    if samples == 0 {
        checks.push(Check {
            name: "sampled_points".into(),
            passed: true,
            detail: "no samples requested".into(),
        });
    }
    Ok(Report::from_checks(checks))
}

/// Randomized search for an affine selector on `G` with values in `span(basis)`.
///
/// Each trial draws unit directions in `Im(B)` for an affinely independent
/// subset of vertices (flipping the sign into the vertex cone when needed),
/// extends them affinely to the remaining vertices, and accepts the tuple
/// when every vertex cone holds and `0` is outside the hull of the values.
/// Returns the first law found within `budget` trials.
pub fn falsify_by_search<S: Scalar>(
    simplex: &Simplex<S>,
    vertices: &[Vector<S>],
    basis: &[Vector<S>],
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Option<AffineLaw<f64>>> {
    let simplex = to_f64_simplex(simplex)?;
    let vertices: Vec<Vec<f64>> = vertices.iter().map(|v| linalg::to_f64_vec(v)).collect();
    let frame = orthonormal_basis(basis);
    if frame.is_empty() || vertices.is_empty() {
        return Ok(None);
    }
    let cones = vertices
        .iter()
        .map(|o| simplex.tangent_cone(o, tol.bary))
        .collect::<Result<Vec<_>>>()?;
    let independent = linalg::affinely_independent_subset(&vertices, tol.rank);
    let anchors: Vec<Vec<f64>> = independent.iter().map(|&i| vertices[i].clone()).collect();
    let dependent: Vec<(usize, Vec<f64>)> = (0..vertices.len())
        .filter(|i| !independent.contains(i))
        .filter_map(|i| linalg::affine_coordinates(&anchors, &vertices[i], tol.rank).map(|w| (i, w)))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = vertices[0].len();
    let mut values = vec![vec![0.0; n]; vertices.len()];
    'trials: for _ in 0..budget {
        for &i in &independent {
            let z: Vec<f64> = (0..frame.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut y = linalg::combine(&z, &frame);
            let norm = linalg::norm2_f64(&y);
            if norm == 0.0 {
                continue 'trials;
            }
            y.iter_mut().for_each(|c| *c /= norm);
            if !cones[i].contains(&y, tol.feas) {
                y.iter_mut().for_each(|c| *c = -*c);
                if !cones[i].contains(&y, tol.feas) {
                    continue 'trials;
                }
            }
            values[i] = y;
        }
        let anchor_values: Vec<Vec<f64>> = independent.iter().map(|&i| values[i].clone()).collect();
        for (i, w) in &dependent {
            let y = linalg::combine(w, &anchor_values);
            if !cones[*i].contains(&y, tol.feas) {
                continue 'trials;
            }
            values[*i] = y;
        }
        if !zero_in_hull(&values, tol)? {
            return Ok(Some(AffineLaw::new(vertices.clone(), values, tol.rank)?));
        }
    }
    Ok(None)
}

fn to_f64_simplex<S: Scalar>(simplex: &Simplex<S>) -> Result<Simplex<f64>> {
    let vertices = simplex.vertices().iter().map(|v| linalg::to_f64_vec(v)).collect();
    Simplex::new(vertices, 0.0)
}

/// Gram-Schmidt in `f64`.
fn orthonormal_basis<S: Scalar>(basis: &[Vector<S>]) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = linalg::to_f64_vec(b);
        for e in &frame {
            let c = linalg::dot(&v, e);
            v = linalg::axpy(&v, &-c, e);
        }
        let norm = linalg::norm2_f64(&v);
        if norm > 1e-12 {
            frame.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    frame
}
