//! JSON reports. All numbers are rendered by the active backend (`"p/q"` in
//! exact mode, shortest round-trip decimals in float mode), so a report reads
//! back into exactly the values that produced it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{ConeCondition, ObstructionCertificate};
use crate::geometry::IndexSet;
use crate::instance::{from_json, to_json_pretty};
use crate::law::AffineLaw;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Scalar, Tolerances};
use crate::synthesis::{Analysis, Analyzed, Construction, Outcome, SynthesisResult, TraceValue, VacuousReason, Verdict};
use crate::system::{CaseTag, Shape};
use crate::verify::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn of<S: Scalar>() -> Self {
        if S::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSection {
    pub tag: CaseTag,
    pub permutation: Vec<usize>,
    pub vertex_order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSection {
    pub kappa: usize,
    pub shape: Shape,
    pub vertices: Vec<Vec<String>>,
    pub active_sets: Vec<IndexSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionSection {
    pub input_dim: usize,
    pub restricted_rank: usize,
    pub stage_one_minima: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    /// Indices `j` of the constraints `h_j . y <= 0` defining `cone(G)`.
    pub constraints: IndexSet,
    /// Whether `cone(G) ∩ Im(B) != {0}`.
    pub condition: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalForm {
    #[serde(rename = "F")]
    pub f: Vec<Vec<String>>,
    pub g: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSection {
    pub vertex_inputs: Vec<Vec<String>>,
    #[serde(rename = "K")]
    pub gain: Vec<Vec<String>>,
    pub k: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawSection {
    pub vertices: Vec<Vec<String>>,
    pub values: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantityValue {
    Scalar(String),
    Vector(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: QuantityValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSection {
    pub name: Construction,
    pub quantities: Vec<Quantity>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuous_reason: Option<VacuousReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Report>,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

fn row<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::render).collect()
}

fn rows<S: Scalar>(vs: &[Vector<S>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| row(v)).collect()
}

fn matrix<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| row(m.row(i))).collect()
}

fn obstruction<S: Scalar>(cert: &ObstructionCertificate<S>) -> ObstructionSection {
    ObstructionSection {
        input_dim: cert.input_dim,
        restricted_rank: cert.restricted_rank,
        stage_one_minima: cert.stage_one_minima.iter().map(|(j, m)| (*j, m.render())).collect(),
    }
}

impl ReportFile {
    fn empty<S: Scalar>(verdict: Verdict, tol: &Tolerances) -> Self {
        Self {
            mode: Mode::of::<S>(),
            instance: None,
            verdict,
            vacuous_reason: None,
            case: None,
            polytope: None,
            cone: None,
            law: None,
            construction: None,
            certificate: None,
            tolerances: tol.clone(),
            timing_ms: None,
        }
    }

    fn fill_analysis<S: Scalar>(&mut self, a: &Analysis<S>) {
        self.case = Some(CaseSection {
            tag: a.case.tag,
            permutation: a.case.permutation.clone(),
            vertex_order: a.case.vertex_order.clone(),
            flags: a.case.flags.clone(),
        });
        self.polytope = Some(PolytopeSection {
            kappa: a.polytope.dim(),
            shape: a.polytope.shape(),
            vertices: rows(a.polytope.vertices()),
            active_sets: a.polytope.active_sets().to_vec(),
        });
        let (witness, obstruction) = match &a.cone_condition {
            ConeCondition::Satisfied(w) => (Some(row(&w.vector)), None),
            ConeCondition::Violated(c) => (None, Some(obstruction(c))),
        };
        self.cone = Some(ConeSection {
            constraints: a.cone.constraints(),
            condition: a.cone_condition.holds(),
            witness,
            obstruction,
        });
    }

    /// Classification and cone condition only.
    pub fn from_analysis<S: Scalar>(analyzed: &Analyzed<S>, tol: &Tolerances) -> Result<Self> {
        match analyzed {
            Analyzed::Vacuous(reason) => {
                let mut r = Self::empty::<S>(Verdict::Vacuous, tol);
                r.vacuous_reason = Some(*reason);
                Ok(r)
            }
            Analyzed::Analysis(a) => {
                let verdict = a.predicted_verdict().ok_or_else(|| {
                    Error::Unsupported(format!("no verdict rule for {}", a.case.tag))
                })?;
                let mut r = Self::empty::<S>(verdict, tol);
                r.fill_analysis(a);
                Ok(r)
            }
        }
    }

    pub fn from_synthesis<S: Scalar>(result: &SynthesisResult<S>, tol: &Tolerances) -> Self {
        let mut r = Self::empty::<S>(result.verdict(), tol);
        if let Some(a) = &result.analysis {
            r.fill_analysis(a);
        }
        match &result.outcome {
            Outcome::Vacuous(reason) => r.vacuous_reason = Some(*reason),
            Outcome::Obstructed(_) => {}
            Outcome::Feasible(f) => {
                r.law = Some(law_section(&f.law, Some(&f.input)));
                r.construction = Some(ConstructionSection {
                    name: f.trace.construction,
                    quantities: f
                        .trace
                        .quantities
                        .iter()
                        .map(|(name, v)| Quantity {
                            name: name.clone(),
                            value: match v {
                                TraceValue::Scalar(s) => QuantityValue::Scalar(s.render()),
                                TraceValue::Vector(v) => QuantityValue::Vector(row(v)),
                            },
                        })
                        .collect(),
                    notes: f.trace.notes.clone(),
                });
                r.certificate = Some(f.certificate.clone());
            }
        }
        r
    }

    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }

    /// The law stored in this report, parsed with backend `S`.
    pub fn parse_law<S: Scalar>(&self, tau_rank: f64) -> Result<AffineLaw<S>> {
        let law = self.law.as_ref().ok_or_else(|| Error::Schema {
            path: "law".into(),
            message: "report carries no law".into(),
        })?;
        law.parse(tau_rank)
    }
}

pub fn law_section<S: Scalar>(law: &AffineLaw<S>, input: Option<&crate::law::InputLaw<S>>) -> LawSection {
    LawSection {
        vertices: rows(law.vertices()),
        values: rows(law.values()),
        global: law.global_form().map(|(f, g)| GlobalForm {
            f: matrix(&f),
            g: row(&g),
        }),
        input: input.map(|u| InputSection {
            vertex_inputs: rows(&u.vertex_inputs),
            gain: matrix(&u.gain),
            k: row(&u.offset),
        }),
    }
}

impl LawSection {
    pub fn parse<S: Scalar>(&self, tau_rank: f64) -> Result<AffineLaw<S>> {
        let parse = |data: &[Vec<String>], name: &str| -> Result<Vec<Vector<S>>> {
            data.iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            S::parse(x).ok_or_else(|| Error::Schema {
                                path: format!("law.{name}[{i}][{j}]"),
                                message: format!("{x:?} is not a number"),
                            })
                        })
                        .collect()
                })
                .collect()
        };
        AffineLaw::new(parse(&self.vertices, "vertices")?, parse(&self.values, "values")?, tau_rank)
    }
}

/// Output of the stand-alone checker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyFile {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    /// `"pass"` or `"fail"`.
    pub verdict: String,
    pub certificate: Report,
    pub sampling: Report,
    pub tolerances: Tolerances,
}

impl VerifyFile {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceFile;
    use crate::scalar::Rational;
    use crate::synthesis::{synthesize, SynthesisOptions};

    const PLANAR: &str = r#"{
        "n": 2,
        "simplex": { "vertices": [["0", "0"], ["1", "0"], ["0", "1"]] },
        "system": { "A": [["1", "0"], ["0", "1"]], "B": [["1"], ["0"]], "a": ["0", "-1/4"] }
    }"#;

    fn report<S: Scalar>() -> ReportFile {
        let tol = Tolerances::default();
        let p = InstanceFile::from_json(PLANAR).unwrap().to_problem::<S>(&tol).unwrap();
        let result = synthesize(&p.system, &p.simplex, &SynthesisOptions::default()).unwrap();
        ReportFile::from_synthesis(&result, &tol)
    }

    #[test]
    fn round_trips_losslessly() {
        for r in [report::<Rational>(), report::<f64>()] {
            let text = r.to_json();
            let back = ReportFile::from_json(&text).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn planar_example_is_a_constant_law() {
        let r = report::<Rational>();
        assert_eq!(r.verdict, Verdict::Feasible);
        assert_eq!(r.case.as_ref().unwrap().tag, CaseTag::N2D1B1);
        assert_eq!(r.construction.as_ref().unwrap().name, Construction::ConstantWitness);
        let law = r.parse_law::<Rational>(0.0).unwrap();
        assert_eq!(law.values()[0], law.values()[1]);
        assert!(r.to_json().contains("\"verdict\": \"feasible\""));
    }
}
