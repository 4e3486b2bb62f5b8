//! Affine feedback synthesis on the restriction polytope `G`.
//!
//! Every arm produces vertex values `f(o_i) in Im(B) ∩ C(o_i)` whose convex
//! hull avoids the origin; the affine extension of those values is the
//! closed-loop vector field on `G`, and [`recover_input`] turns it into an
//! input. The result is re-checked by [`check_certificate`] before it is
//! returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{independent_cone_vectors, nontrivial_cone_subspace_element, ConeCondition, ObstructionCertificate};
use crate::geometry::{cone_inclusion, HalfspaceCone, Simplex};
use crate::law::{recover_input, AffineLaw, InputLaw};
use crate::linalg::{self, dot, Vector};
use crate::scalar::{is_negative, is_positive, is_zero, Scalar, Tolerances};
use crate::system::{
    classify, equilibrium_subspace, restriction_polytope, AffineControlSystem, CaseLabel, CaseTag, RestrictionPolytope,
};
use crate::verify::{check_certificate, Report};

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisOptions {
    pub tolerances: Tolerances,
    /// Try a constant law first in the arms that do not need one.
    pub allow_constant: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            allow_constant: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Obstructed,
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Feasible => "feasible",
            Verdict::Obstructed => "obstructed",
            Verdict::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VacuousReason {
    /// `A x + a` never lies in `Im(B)`.
    EmptyEquilibriumSet,
    /// The equilibrium set misses the simplex.
    EmptyIntersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `f = b` for a nonzero `b in cone(G) ∩ Im(B)`.
    ConstantWitness,
    /// Independent values at the two endpoints of a segment.
    SegmentInterpolation,
    /// `(b1, b2, b2)` on a triangle with one vertex at a simplex vertex.
    TriangleThroughVertex,
    /// Scaled values on a quadrilateral section.
    Quadrilateral,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TraceValue<S> {
    Scalar(S),
    Vector(Vector<S>),
}

/// Intermediate quantities of a construction, for reports.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionTrace<S> {
    pub construction: Construction,
    pub quantities: Vec<(String, TraceValue<S>)>,
    pub notes: Vec<String>,
}

impl<S> ConstructionTrace<S> {
    fn new(construction: Construction) -> Self {
        Self {
            construction,
            quantities: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn scalar(&mut self, name: &str, value: S) {
        self.quantities.push((name.to_string(), TraceValue::Scalar(value)));
    }

    fn vector(&mut self, name: &str, value: Vector<S>) {
        self.quantities.push((name.to_string(), TraceValue::Vector(value)));
    }
}

/// Everything decided before a law is constructed.
#[derive(Clone, Debug)]
pub struct Analysis<S> {
    pub polytope: RestrictionPolytope<S>,
    pub case: CaseLabel,
    /// `cone(G)`
    pub cone: HalfspaceCone<S>,
    pub cone_condition: ConeCondition<S>,
}

impl<S: Scalar> Analysis<S> {
    /// The verdict implied by the case tag and the cone condition.
    pub fn predicted_verdict(&self) -> Option<Verdict> {
        let tag = self.case.tag;
        if tag.always_feasible() {
            Some(Verdict::Feasible)
        } else if tag.cone_condition_is_necessary() {
            Some(if self.cone_condition.holds() {
                Verdict::Feasible
            } else {
                Verdict::Obstructed
            })
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub enum Analyzed<S> {
    Vacuous(VacuousReason),
    Analysis(Box<Analysis<S>>),
}

/// Computes `O`, `G`, the case label, `cone(G)` and the cone condition.
pub fn analyze<S: Scalar>(sys: &AffineControlSystem<S>, simplex: &Simplex<S>, tol: &Tolerances) -> Result<Analyzed<S>> {
    match equilibrium_subspace(sys, tol.rank) {
        Err(Error::EmptyO) => return Ok(Analyzed::Vacuous(VacuousReason::EmptyEquilibriumSet)),
        Err(e) => return Err(e),
        Ok(_) => {}
    }
    let polytope = match restriction_polytope(sys, simplex, tol) {
        Err(Error::EmptyIntersection) => return Ok(Analyzed::Vacuous(VacuousReason::EmptyIntersection)),
        other => other?,
    };
    let case = classify(&polytope, simplex, sys.input_dim(), tol)?;
    let cone = simplex.cone_of_polytope(polytope.vertices(), tol.bary)?;
    let cone_condition = nontrivial_cone_subspace_element(&cone, sys.input_basis(), tol)?;
    Ok(Analyzed::Analysis(Box::new(Analysis {
        polytope,
        case,
        cone,
        cone_condition,
    })))
}

#[derive(Clone, Debug)]
pub struct FeasibleLaw<S> {
    pub law: AffineLaw<S>,
    pub input: InputLaw<S>,
    pub trace: ConstructionTrace<S>,
    pub certificate: Report,
}

#[derive(Clone, Debug)]
pub enum Outcome<S> {
    Feasible(Box<FeasibleLaw<S>>),
    Obstructed(ObstructionCertificate<S>),
    Vacuous(VacuousReason),
}

#[derive(Clone, Debug)]
pub struct SynthesisResult<S> {
    /// `None` exactly when the problem is vacuous. The case label reflects any
    /// relabeling made during construction.
    pub analysis: Option<Analysis<S>>,
    pub outcome: Outcome<S>,
}

impl<S> SynthesisResult<S> {
    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            Outcome::Feasible(_) => Verdict::Feasible,
            Outcome::Obstructed(_) => Verdict::Obstructed,
            Outcome::Vacuous(_) => Verdict::Vacuous,
        }
    }

    pub fn feasible(&self) -> Option<&FeasibleLaw<S>> {
        match &self.outcome {
            Outcome::Feasible(f) => Some(f),
            _ => None,
        }
    }

    pub fn case(&self) -> Option<&CaseLabel> {
        self.analysis.as_ref().map(|a| &a.case)
    }
}

/// Decides solvability by affine feedback and, when solvable, constructs
/// and certifies a law.
pub fn synthesize<S: Scalar>(
    sys: &AffineControlSystem<S>,
    simplex: &Simplex<S>,
    opts: &SynthesisOptions,
) -> Result<SynthesisResult<S>> {
    let tol = &opts.tolerances;
    let mut analysis = match analyze(sys, simplex, tol)? {
        Analyzed::Vacuous(reason) => {
            return Ok(SynthesisResult {
                analysis: None,
                outcome: Outcome::Vacuous(reason),
            })
        }
        Analyzed::Analysis(a) => *a,
    };
    let tag = analysis.case.tag;
    let constant_first = opts.allow_constant && analysis.cone_condition.holds();

    let built = match tag {
        CaseTag::Unsupported => {
            return Err(Error::Unsupported(format!(
                "no synthesis arm for n = {} with dim G = {}",
                simplex.dim(),
                analysis.polytope.dim()
            )))
        }
        t if t.cone_condition_is_necessary() => match &analysis.cone_condition {
            ConeCondition::Satisfied(w) => constant_law(&analysis.polytope, &w.vector, tol)?,
            ConeCondition::Violated(cert) => {
                return Ok(SynthesisResult {
                    outcome: Outcome::Obstructed(cert.clone()),
                    analysis: Some(analysis),
                })
            }
        },
        _ if constant_first => constant_law(&analysis.polytope, &witness(&analysis)?, tol)?,
        CaseTag::N3D1B2 => segment_law(sys, simplex, &analysis, tol)?,
        CaseTag::N3D2B2VertexTri => triangle_through_vertex(sys, simplex, &analysis, tol)?,
        CaseTag::N3D2B2Quad => quadrilateral(sys, simplex, &analysis, tol)?,
        other => {
            return Err(Error::InternalInvariantBroken(format!("no arm for {other}")))
        }
    };
    let Built { law, trace, case } = built;
    if let Some(case) = case {
        analysis.case = case;
    }

    let input = recover_input(sys, &law, tol)?;
    let certificate = check_certificate(simplex, sys, &law, &analysis.polytope, tol)?;
    if !certificate.passed {
        let failed: Vec<String> = certificate
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::InternalInvariantBroken(format!(
            "constructed law fails its certificate ({})",
            failed.join("; ")
        )));
    }
    Ok(SynthesisResult {
        analysis: Some(analysis),
        outcome: Outcome::Feasible(Box::new(FeasibleLaw {
            law,
            input,
            trace,
            certificate,
        })),
    })
}

struct Built<S> {
    law: AffineLaw<S>,
    trace: ConstructionTrace<S>,
    /// Replacement case label after a relabeling.
    case: Option<CaseLabel>,
}

fn witness<S: Scalar>(analysis: &Analysis<S>) -> Result<Vector<S>> {
    analysis
        .cone_condition
        .witness()
        .map(|w| w.vector.clone())
        .ok_or_else(|| Error::InternalInvariantBroken("cone condition fails in a fallback".into()))
}

fn constant_law<S: Scalar>(g: &RestrictionPolytope<S>, b: &[S], tol: &Tolerances) -> Result<Built<S>> {
    let mut trace = ConstructionTrace::new(Construction::ConstantWitness);
    trace.vector("b", b.to_vec());
    Ok(Built {
        law: AffineLaw::constant(g.vertices().to_vec(), b, tol.rank)?,
        trace,
        case: None,
    })
}

/// A constant law from `cone(G) ∩ Im(B)` after an independent pair could
/// not be found; the cone condition holds in every such configuration.
fn fallback<S: Scalar>(analysis: &Analysis<S>, why: &str, tol: &Tolerances) -> Result<Built<S>> {
    let mut built = constant_law(&analysis.polytope, &witness(analysis)?, tol)?;
    built.trace.notes.push(why.to_string());
    Ok(built)
}

fn canonical_vertices<S: Scalar>(g: &RestrictionPolytope<S>, case: &CaseLabel) -> Vec<Vector<S>> {
    case.vertex_order.iter().map(|&i| g.vertices()[i].clone()).collect()
}

/// Places canonical values back in the vertex order of `G`.
fn law_from_canonical<S: Scalar>(
    g: &RestrictionPolytope<S>,
    case: &CaseLabel,
    canonical: Vec<Vector<S>>,
    tol: &Tolerances,
) -> Result<AffineLaw<S>> {
    let mut values = vec![Vec::new(); g.vertices().len()];
    for (&i, v) in case.vertex_order.iter().zip(canonical) {
        values[i] = v;
    }
    AffineLaw::new(g.vertices().to_vec(), values, tol.rank)
}

fn segment_law<S: Scalar>(
    sys: &AffineControlSystem<S>,
    simplex: &Simplex<S>,
    analysis: &Analysis<S>,
    tol: &Tolerances,
) -> Result<Built<S>> {
    let o = canonical_vertices(&analysis.polytope, &analysis.case);
    let c1 = simplex.tangent_cone(&o[0], tol.bary)?;
    let c2 = simplex.tangent_cone(&o[1], tol.bary)?;
    let (b1, b2) = match independent_cone_vectors(&c1, &c2, sys.input_basis(), sys.annihilator(), tol) {
        Ok(pair) => pair,
        Err(Error::AssumptionViolated(why)) => return fallback(analysis, &why, tol),
        Err(e) => return Err(e),
    };
    let mut trace = ConstructionTrace::new(Construction::SegmentInterpolation);
    trace.vector("b1", b1.clone());
    trace.vector("b2", b2.clone());
    Ok(Built {
        law: law_from_canonical(&analysis.polytope, &analysis.case, vec![b1, b2], tol)?,
        trace,
        case: None,
    })
}

fn triangle_through_vertex<S: Scalar>(
    sys: &AffineControlSystem<S>,
    simplex: &Simplex<S>,
    analysis: &Analysis<S>,
    tol: &Tolerances,
) -> Result<Built<S>> {
    let o = canonical_vertices(&analysis.polytope, &analysis.case);
    let cones = o
        .iter()
        .map(|x| simplex.tangent_cone(x, tol.bary))
        .collect::<Result<Vec<_>>>()?;
    if !cone_inclusion(&cones[1], &cones[2]) {
        return Err(Error::PreconditionViolated("C(o2) is not contained in C(o3)".into()));
    }
    let (b1, b2) = match independent_cone_vectors(&cones[0], &cones[1], sys.input_basis(), sys.annihilator(), tol) {
        Ok(pair) => pair,
        Err(Error::AssumptionViolated(why)) => return fallback(analysis, &why, tol),
        Err(e) => return Err(e),
    };
    let mut trace = ConstructionTrace::new(Construction::TriangleThroughVertex);
    trace.vector("b1", b1.clone());
    trace.vector("b2", b2.clone());
    let values = vec![b1, b2.clone(), b2];
    Ok(Built {
        law: law_from_canonical(&analysis.polytope, &analysis.case, values, tol)?,
        trace,
        case: None,
    })
}

fn quadrilateral<S: Scalar>(
    sys: &AffineControlSystem<S>,
    simplex: &Simplex<S>,
    analysis: &Analysis<S>,
    tol: &Tolerances,
) -> Result<Built<S>> {
    let g = &analysis.polytope;
    let mut case = analysis.case.clone();
    let o = canonical_vertices(g, &case);
    let c1 = simplex.tangent_cone(&o[0], tol.bary)?;
    let c2 = simplex.tangent_cone(&o[1], tol.bary)?;
    let (mut b1, mut b2) = match independent_cone_vectors(&c1, &c2, sys.input_basis(), sys.annihilator(), tol) {
        Ok(pair) => pair,
        Err(Error::AssumptionViolated(why)) => return fallback(analysis, &why, tol),
        Err(e) => return Err(e),
    };
    let mut trace = ConstructionTrace::new(Construction::Quadrilateral);
    trace.vector("b1_initial", b1.clone());
    trace.vector("b2_initial", b2.clone());

    let h = |case: &CaseLabel, c: usize| simplex.normal(case.permutation[c]).to_vec();
    let neg = |b: &[S], n: &[S]| is_negative(&dot(b, n), tol.strict, linalg::norm2_f64(b) * linalg::norm2_f64(n));
    let pos = |b: &[S], n: &[S]| is_positive(&dot(b, n), tol.feas, linalg::norm2_f64(b) * linalg::norm2_f64(n));

    if !neg(&b2, &h(&case, 2)) {
        if neg(&b1, &h(&case, 3)) {
            trace.notes.push("relabeled 2 <-> 3 so that b2 . h2 < 0".into());
            case = case.swap_quadrilateral_roles();
            std::mem::swap(&mut b1, &mut b2);
        } else {
            trace.notes.push("b2 . h2 = 0 and b1 . h3 = 0".into());
            let (h1, h2, h3) = (h(&case, 1), h(&case, 2), h(&case, 3));
            if neg(&b1, &h2) {
                // b1 + b2 stays in C(o2) and gains b . h2 < 0.
                b2 = linalg::add(&b1, &b2);
                trace.notes.push("b1 . h2 < 0: b2 <- b1 + b2".into());
            } else if neg(&b2, &h3) {
                b1 = linalg::add(&b1, &b2);
                trace.notes.push("b2 . h3 < 0: b1 <- b1 + b2, then relabeled 2 <-> 3".into());
                case = case.swap_quadrilateral_roles();
                std::mem::swap(&mut b1, &mut b2);
            } else if !pos(&b1, &h2) {
                // Im(B) lies in h2^perp, so no law has f(o4) . h2 < 0.
                let mut built = constant_law(g, &b1, tol)?;
                built.trace.notes.push("b1 . h2 = 0 puts b1 in cone(G)".into());
                return Ok(built);
            } else if !pos(&b2, &h3) {
                let mut built = constant_law(g, &b2, tol)?;
                built.trace.notes.push("b2 . h3 = 0 puts b2 in cone(G)".into());
                return Ok(built);
            } else {
                let repair_coefficient = |target: &[S], other: &[S]| {
                    let t = dot(target, &h1);
                    let s = dot(other, &h1);
                    if is_zero(&s, tol.strict, linalg::norm2_f64(other) * linalg::norm2_f64(&h1)) {
                        S::one()
                    } else {
                        t / (S::from_i64(2) * s)
                    }
                };
                if neg(&b1, &h1) {
                    let c = repair_coefficient(&b1, &b2);
                    b1 = linalg::axpy(&b1, &-c.clone(), &b2);
                    trace.scalar("c", c);
                    trace.notes.push("b1 <- b1 - c b2, then relabeled 2 <-> 3".into());
                    case = case.swap_quadrilateral_roles();
                    std::mem::swap(&mut b1, &mut b2);
                } else if neg(&b2, &h1) {
                    let c = repair_coefficient(&b2, &b1);
                    b2 = linalg::axpy(&b2, &-c.clone(), &b1);
                    trace.scalar("c", c);
                    trace.notes.push("b2 <- b2 - c b1".into());
                } else {
                    b1 = linalg::sub(&b1, &b2);
                    trace.notes.push("b1 <- b1 - b2, then relabeled 2 <-> 3".into());
                    case = case.swap_quadrilateral_roles();
                    std::mem::swap(&mut b1, &mut b2);
                }
            }
        }
    }

    let o = canonical_vertices(g, &case);
    let h2 = h(&case, 2);
    let b2h2 = dot(&b2, &h2);
    if !neg(&b2, &h2) {
        return Err(Error::InternalInvariantBroken("b2 . h2 < 0 fails after relabeling".into()));
    }
    let alpha = linalg::affine_coordinates(&o[..3], &o[3], tol.rank)
        .ok_or_else(|| Error::InternalInvariantBroken("quadrilateral is not planar".into()))?;
    if !alpha[1].is_positive() {
        return Err(Error::InternalInvariantBroken(
            "o4 has a nonpositive weight on o2".into(),
        ));
    }
    let outer = alpha[0].clone() + alpha[2].clone();
    let b1h2 = dot(&b1, &h2);
    let denom = outer.clone() * b1h2;
    let two = S::from_i64(2);
    let epsilon = if is_zero(&denom, tol.strict, linalg::norm2_f64(&b1) * linalg::norm2_f64(&h2)) {
        S::one()
    } else {
        -(alpha[1].clone() * b2h2.clone()) / (two.clone() * denom).abs()
    };
    let f1 = linalg::scale(&b1, &epsilon);
    let f4 = linalg::add(
        &linalg::scale(&b1, &(epsilon.clone() * outer)),
        &linalg::scale(&b2, &alpha[1]),
    );
    let f4h2 = dot(&f4, &h2);
    let bound = alpha[1].clone() * b2h2 / two;
    if !neg(&f4, &h2) {
        return Err(Error::InternalInvariantBroken("f(o4) . h2 < 0 fails".into()));
    }
    trace.vector("b1", b1.clone());
    trace.vector("b2", b2.clone());
    trace.vector("alpha", alpha);
    trace.scalar("epsilon", epsilon);
    trace.scalar("f4_dot_h2", f4h2);
    trace.scalar("f4_dot_h2_bound", bound);
    let values = vec![f1.clone(), b2, f1, f4];
    let law = law_from_canonical(g, &case, values, tol)?;
    let relabeled = (case != analysis.case).then_some(case);
    Ok(Built {
        law,
        trace,
        case: relabeled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn unit_tetrahedron() -> Simplex<Rational> {
        let z = q(0, 1);
        let o = q(1, 1);
        Simplex::new(
            vec![
                vec![z.clone(), z.clone(), z.clone()],
                vec![o.clone(), z.clone(), z.clone()],
                vec![z.clone(), o.clone(), z.clone()],
                vec![z.clone(), z.clone(), o],
            ],
            0.0,
        )
        .unwrap()
    }

    /// `A = I`, `a = -offset * normal / |normal|^2`, `Im(B) = span(basis)`;
    /// `O` is the plane `normal . x = offset` whenever `basis` spans `normal^perp`.
    fn plane_system(normal: [i64; 3], offset: Rational, basis: [[i64; 3]; 2]) -> AffineControlSystem<Rational> {
        let nv: Vec<Rational> = normal.iter().map(|&x| q(x, 1)).collect();
        let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.iter().map(|&x| q(x, 1)).collect()).collect();
        for c in &cols {
            assert!(dot(c, &nv) == q(0, 1));
        }
        let nn = dot(&nv, &nv);
        let a: Vec<Rational> = nv.iter().map(|x| -x.clone() * offset.clone() / nn.clone()).collect();
        AffineControlSystem::new(Matrix::identity(3), Matrix::from_columns(&cols, 3), a, 0.0).unwrap()
    }

    fn no_constant() -> SynthesisOptions {
        SynthesisOptions {
            allow_constant: false,
            ..SynthesisOptions::default()
        }
    }

    #[test]
    fn symmetric_triangle_verdicts() {
        let s = unit_tetrahedron();
        // x + y + z = 1/2 with Im(B) its direction plane: cone(G) = {y >= 0}
        // meets the plane {sum y = 0} only at 0.
        let sys = plane_system([1, 1, 1], q(1, 2), [[1, -1, 0], [0, 1, -1]]);
        let result = synthesize(&sys, &s, &SynthesisOptions::default()).unwrap();
        assert_eq!(result.case().unwrap().tag, CaseTag::N3D2B2SymTri);
        assert_eq!(result.verdict(), Verdict::Obstructed);
    }

    #[test]
    fn quadrilateral_without_constant() {
        let s = unit_tetrahedron();
        let sys = plane_system([1, 1, 0], q(1, 2), [[1, -1, 0], [0, 0, 1]]);
        let result = synthesize(&sys, &s, &no_constant()).unwrap();
        assert_eq!(result.case().unwrap().tag, CaseTag::N3D2B2Quad);
        let feasible = result.feasible().expect("quadrilateral is always feasible");
        assert_eq!(feasible.trace.construction, Construction::Quadrilateral);
        assert!(feasible.certificate.passed);
    }

    #[test]
    fn midpoint_quadrilateral_with_blocked_cone() {
        // O = { y + z = 1/2 } cuts v0v2, v0v3, v1v2, v1v3 at their midpoints;
        // Im(B) = { sum y = 0 } misses cone(G) = C(v0) except at 0.
        let s = unit_tetrahedron();
        let b = Matrix::from_columns(&[vec![q(1, 1), q(-1, 1), q(0, 1)], vec![q(0, 1), q(1, 1), q(-1, 1)]], 3);
        let a = Matrix::from_rows(
            &[
                vec![q(0, 1), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1), q(0, 1)],
                vec![q(0, 1), q(0, 1), q(1, 1)],
            ],
            3,
        );
        let sys = AffineControlSystem::new(a, b, vec![q(0, 1), q(-1, 4), q(-1, 4)], 0.0).unwrap();
        let result = synthesize(&sys, &s, &SynthesisOptions::default()).unwrap();
        let analysis = result.analysis.as_ref().unwrap();
        assert_eq!(analysis.case.tag, CaseTag::N3D2B2Quad);
        assert!(!analysis.cone_condition.holds());
        let feasible = result.feasible().unwrap();
        assert_eq!(feasible.trace.construction, Construction::Quadrilateral);
        let mut vs = analysis.polytope.vertices().to_vec();
        vs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(vs[0], vec![q(0, 1), q(0, 1), q(1, 2)]);
        assert_eq!(vs[3], vec![q(1, 2), q(1, 2), q(0, 1)]);
    }

    #[test]
    fn vertex_triangle_without_constant() {
        let s = unit_tetrahedron();
        let sys = plane_system([1, 2, 0], q(1, 1), [[2, -1, 0], [0, 0, 1]]);
        let result = synthesize(&sys, &s, &no_constant()).unwrap();
        assert_eq!(result.case().unwrap().tag, CaseTag::N3D2B2VertexTri);
        let feasible = result.feasible().unwrap();
        assert_eq!(feasible.trace.construction, Construction::TriangleThroughVertex);
    }

    #[test]
    fn vacuous_when_plane_misses() {
        let s = unit_tetrahedron();
        let sys = plane_system([1, 1, 1], q(2, 1), [[1, -1, 0], [0, 1, -1]]);
        let result = synthesize(&sys, &s, &SynthesisOptions::default()).unwrap();
        assert_eq!(result.verdict(), Verdict::Vacuous);
        assert!(result.analysis.is_none());
    }

    #[test]
    fn float_backend_matches_exact_on_quadrilateral() {
        let s = unit_tetrahedron();
        let sys = plane_system([1, 1, 0], q(1, 2), [[1, -1, 0], [0, 0, 1]]);
        let to_f = |m: &Matrix<Rational>| m.map(|x| x.to_f64());
        let sf: Simplex<f64> = Simplex::new(s.vertices().iter().map(|v| linalg::to_f64_vec(v)).collect(), 1e-10).unwrap();
        let sysf = AffineControlSystem::new(to_f(sys.a()), to_f(sys.b()), linalg::to_f64_vec(sys.offset()), 1e-10).unwrap();
        let exact = synthesize(&sys, &s, &no_constant()).unwrap();
        let float = synthesize(&sysf, &sf, &no_constant()).unwrap();
        assert_eq!(exact.verdict(), float.verdict());
        assert_eq!(exact.case().unwrap().tag, float.case().unwrap().tag);
    }
}
