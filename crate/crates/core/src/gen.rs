//! Seeded random instances for every case tag.
//!
//! Each tag has a construction that places the equilibrium set `O` where the
//! tag needs it (a point, a line or a plane through chosen points of the
//! simplex); the system is then solved for from `O` and a random input space.
//! Candidates are classified exactly and rejected until the tag matches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Simplex;
use crate::instance::{InstanceFile, Metadata};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::{Rational, Scalar, Tolerances};
use crate::synthesis::{analyze, Analyzed};
use crate::system::{AffineControlSystem, CaseTag};

type Q = Rational;

const MAX_ATTEMPTS: usize = 5000;

fn int(x: i64) -> Q {
    Q::from_i64(x)
}

/// `{ x : N x = c }`; no rows means the whole space.
struct Target {
    normals: Vec<Vector<Q>>,
    values: Vector<Q>,
    input_dim: usize,
}

/// A random instance whose exact classification is `tag`.
pub fn generate(n: usize, tag: CaseTag, seed: u64) -> Result<InstanceFile> {
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("generation supports n = 2 or 3, not {n}")));
    }
    if !tag.valid_for(n) || tag == CaseTag::Unsupported {
        return Err(Error::Unsupported(format!("{tag} does not occur for n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerances::default();
    for _ in 0..MAX_ATTEMPTS {
        let simplex = random_simplex(n, &mut rng);
        let Some(target) = construct(tag, &simplex, &mut rng) else {
            continue;
        };
        let Some((a, b, offset)) = realize(n, &target, &mut rng) else {
            continue;
        };
        let sys = AffineControlSystem::new(a.clone(), b.clone(), offset.clone(), 0.0)?;
        if let Analyzed::Analysis(found) = analyze(&sys, &simplex, &tol)? {
            if found.case.tag == tag {
                let metadata = Metadata {
                    name: Some(format!("{}-n{n}-seed{seed}", tag.as_str().to_lowercase())),
                    seed: Some(seed),
                    case: Some(tag.as_str().to_string()),
                };
                return Ok(InstanceFile::new(simplex.vertices(), &a, &b, &offset, Some(metadata)));
            }
        }
    }
    Err(Error::InternalInvariantBroken(format!(
        "no {tag} instance after {MAX_ATTEMPTS} attempts"
    )))
}

fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Simplex<Q> {
    loop {
        let vertices: Vec<Vector<Q>> = (0..=n)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-4..=4))).collect())
            .collect();
        if let Ok(s) = Simplex::new(vertices, 0.0) {
            return s;
        }
    }
}

fn fraction(rng: &mut ChaCha8Rng) -> Q {
    let den = rng.gen_range(2..=8);
    Q::from_ratio(rng.gen_range(1..den), den)
}

/// `v_i + t (v_j - v_i)` with `t` in `(0, 1)`.
fn edge_point(s: &Simplex<Q>, i: usize, j: usize, rng: &mut ChaCha8Rng) -> Vector<Q> {
    let t = fraction(rng);
    linalg::axpy(s.vertex(i), &t, &linalg::sub(s.vertex(j), s.vertex(i)))
}

/// A point with positive barycentric weights on `face`.
fn face_point(s: &Simplex<Q>, face: &[usize], rng: &mut ChaCha8Rng) -> Vector<Q> {
    let mut weights = vec![int(0); s.dim() + 1];
    for &i in face {
        weights[i] = int(rng.gen_range(1..=6));
    }
    let total = weights.iter().fold(int(0), |acc, w| acc + w.clone());
    let weights: Vec<Q> = weights.into_iter().map(|w| w / total.clone()).collect();
    s.from_barycentric(&weights)
}

/// A random nonempty face of the simplex, optionally excluding `v_0`.
fn random_face(n: usize, with_v0: bool, rng: &mut ChaCha8Rng) -> Vec<usize> {
    loop {
        let face: Vec<usize> = (0..=n)
            .filter(|&i| (with_v0 || i != 0) && rng.gen_bool(0.5))
            .collect();
        if !face.is_empty() {
            return face;
        }
    }
}

fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> Vector<Q> {
    loop {
        let v: Vector<Q> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        if !linalg::is_zero_vector(&v) {
            return v;
        }
    }
}

fn point_target(p: Vector<Q>) -> Target {
    let n = p.len();
    Target {
        normals: Matrix::<Q>::identity(n).row_vecs(),
        values: p,
        input_dim: 0,
    }
}

/// The affine hull of `points` (which must span a `k`-flat).
fn flat_through(points: &[Vector<Q>], input_dim: usize) -> Option<Target> {
    let n = points[0].len();
    let directions: Vec<Vector<Q>> = points[1..].iter().map(|p| linalg::sub(p, &points[0])).collect();
    if linalg::rank(&Matrix::from_rows(&directions, n), 0.0) != directions.len() {
        return None;
    }
    let normals = linalg::nullspace(&Matrix::from_rows(&directions, n), 0.0);
    let values = normals.iter().map(|h| linalg::dot(h, &points[0])).collect();
    Some(Target {
        normals,
        values,
        input_dim,
    })
}

/// The hyperplane through `p` with normal `nu`.
fn plane(nu: Vector<Q>, p: &[Q], input_dim: usize) -> Target {
    let c = linalg::dot(&nu, p);
    Target {
        normals: vec![nu],
        values: vec![c],
        input_dim,
    }
}

fn construct(tag: CaseTag, s: &Simplex<Q>, rng: &mut ChaCha8Rng) -> Option<Target> {
    let n = s.dim();
    let small_input = |rng: &mut ChaCha8Rng| usize::from(rng.gen_bool(0.8));
    match tag {
        CaseTag::Dim0 => match rng.gen_range(0..3) {
            0 => Some(point_target(face_point(s, &random_face(n, true, rng), rng))),
            1 => {
                // A line through a vertex, hoping it only touches there.
                let k = rng.gen_range(0..=n);
                let p = s.vertex(k).to_vec();
                let q = linalg::add(&p, &random_direction(n, rng));
                flat_through(&[p, q], small_input(rng))
            }
            _ => {
                let k = rng.gen_range(0..=n);
                Some(plane(random_direction(n, rng), s.vertex(k), rng.gen_range(0..n)))
            }
        },
        CaseTag::DimN => Some(Target {
            normals: Vec::new(),
            values: Vec::new(),
            input_dim: rng.gen_range(0..=n),
        }),
        CaseTag::V0InG => {
            let v0 = s.vertex(0).to_vec();
            let p = face_point(s, &random_face(n, false, rng), rng);
            if n == 3 && rng.gen_bool(0.6) {
                let q = face_point(s, &random_face(n, false, rng), rng);
                flat_through(&[v0, p, q], rng.gen_range(0..=2))
            } else {
                flat_through(&[v0, p], small_input(rng))
            }
        }
        CaseTag::N2D1B1 => {
            let p = face_point(s, &random_face(n, true, rng), rng);
            let q = face_point(s, &random_face(n, true, rng), rng);
            flat_through(&[p, q], small_input(rng))
        }
        CaseTag::N3D1B1 => {
            if rng.gen_bool(0.3) {
                supporting_edge_plane(s, small_input(rng), rng)
            } else {
                let p = face_point(s, &random_face(n, true, rng), rng);
                let q = face_point(s, &random_face(n, true, rng), rng);
                flat_through(&[p, q], small_input(rng))
            }
        }
        CaseTag::N3D1B2 => supporting_edge_plane(s, 2, rng),
        CaseTag::N3D2B1 => {
            let mut edges = all_edges(n);
            edges.shuffle(rng);
            let points: Vec<Vector<Q>> = edges[..3].iter().map(|&(i, j)| edge_point(s, i, j, rng)).collect();
            flat_through(&points, small_input(rng))
        }
        CaseTag::N3D2B2SymTri => {
            let points: Vec<Vector<Q>> = (1..=3)
                .map(|i| {
                    if rng.gen_bool(0.15) {
                        s.vertex(i).to_vec()
                    } else {
                        edge_point(s, 0, i, rng)
                    }
                })
                .collect();
            flat_through(&points, 2)
        }
        CaseTag::N3D2B2EdgeTri => {
            let k = rng.gen_range(1..=3);
            let points: Vec<Vector<Q>> = (0..=3).filter(|&l| l != k).map(|l| edge_point(s, k, l, rng)).collect();
            flat_through(&points, 2)
        }
        CaseTag::N3D2B2VertexTri => {
            let mut roles = [1, 2, 3];
            roles.shuffle(rng);
            let (k, c, e) = (roles[0], roles[1], roles[2]);
            let points = vec![s.vertex(k).to_vec(), edge_point(s, 0, c, rng), edge_point(s, c, e, rng)];
            flat_through(&points, 2)
        }
        CaseTag::N3D2B2Quad => {
            let mut roles = [1, 2, 3];
            roles.shuffle(rng);
            let (p, a, b) = (roles[0], roles[1], roles[2]);
            let points = vec![edge_point(s, 0, a, rng), edge_point(s, 0, b, rng), edge_point(s, p, a, rng)];
            flat_through(&points, 2)
        }
        CaseTag::Unsupported => None,
    }
}

fn all_edges(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// A plane meeting the simplex exactly in an edge `v_j v_k` with `j, k >= 1`:
/// its normal is a positive combination of the two facet normals at the edge.
fn supporting_edge_plane(s: &Simplex<Q>, input_dim: usize, rng: &mut ChaCha8Rng) -> Option<Target> {
    let mut roles = [1, 2, 3];
    roles.shuffle(rng);
    let (j, m) = (roles[0], roles[2]);
    let nu = linalg::add(
        &linalg::scale(s.normal(0), &int(rng.gen_range(1..=5))),
        &linalg::scale(s.normal(m), &int(rng.gen_range(1..=5))),
    );
    Some(plane(nu, s.vertex(j), input_dim))
}

/// `(A, B, a)` with `{ x : A x + a in Im(B) } = { N x = c }` and
/// `dim Im(B) = target.input_dim`.
fn realize(n: usize, target: &Target, rng: &mut ChaCha8Rng) -> Option<(Matrix<Q>, Matrix<Q>, Vector<Q>)> {
    let d = target.input_dim;
    let r = target.normals.len();
    if r + d > n {
        return None;
    }
    let b0: Vec<Vector<Q>> = (0..d).map(|_| random_direction(n, rng)).collect();
    let b0 = Matrix::from_columns(&b0, n);
    if linalg::rank(&b0, 0.0) != d {
        return None;
    }
    // Rows of M span Im(B)^perp.
    let m = Matrix::from_rows(&linalg::nullspace(&b0.transpose(), 0.0), n);
    let k = m.rows();

    let mut a = Matrix::zeros(n, n);
    let mut offset = linalg::zeros(n);
    if r > 0 {
        // T (k x r) of full column rank mixes the target equations into k rows.
        let t = loop {
            let t = Matrix::from_rows(
                &(0..k)
                    .map(|_| (0..r).map(|_| int(rng.gen_range(-2..=2))).collect())
                    .collect::<Vec<_>>(),
                r,
            );
            if linalg::rank(&t, 0.0) == r {
                break t;
            }
        };
        let normals = Matrix::from_rows(&target.normals, n);
        let lift = m.transpose().mul(&linalg::inverse(&m.mul(&m.transpose()), 0.0)?);
        a = lift.mul(&t).mul(&normals);
        offset = lift
            .mul_vec(&t.mul_vec(&target.values))
            .into_iter()
            .map(|x| -x)
            .collect();
    }
    if d > 0 {
        let mix: Vec<Vector<Q>> = (0..d)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect())
            .collect();
        let mix = Matrix::from_rows(&mix, n);
        a = add(&a, &b0.mul(&mix));
        let shift: Vector<Q> = (0..d).map(|_| int(rng.gen_range(-2..=2))).collect();
        offset = linalg::add(&offset, &b0.mul_vec(&shift));
    }

    let b = if d == 0 {
        Matrix::zeros(n, 1)
    } else {
        let extra = usize::from(rng.gen_bool(0.3));
        let q = loop {
            let q = Matrix::from_rows(
                &(0..d)
                    .map(|_| (0..d + extra).map(|_| int(rng.gen_range(-2..=2))).collect())
                    .collect::<Vec<_>>(),
                d + extra,
            );
            if linalg::rank(&q, 0.0) == d {
                break q;
            }
        };
        b0.mul(&q)
    };
    Some((a, b, offset))
}

fn add(x: &Matrix<Q>, y: &Matrix<Q>) -> Matrix<Q> {
    let rows: Vec<Vector<Q>> = (0..x.rows()).map(|i| linalg::add(x.row(i), y.row(i))).collect();
    Matrix::from_rows(&rows, x.cols())
}
