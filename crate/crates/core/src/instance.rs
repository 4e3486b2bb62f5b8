//! JSON problem instances. Numbers are written as strings (`"3"`, `"-1/4"`,
//! `"0.125"`) so that exact mode is lossless; plain JSON numbers are accepted
//! too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Simplex;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Scalar, Tolerances};
use crate::system::AffineControlSystem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Float(f64),
}

impl Number {
    pub fn from_scalar<S: Scalar>(x: &S) -> Self {
        Number::Text(x.render())
    }

    pub fn to_scalar<S: Scalar>(&self, path: &str) -> Result<S> {
        match self {
            Number::Text(s) => S::parse(s.trim()).ok_or_else(|| Error::Schema {
                path: path.to_string(),
                message: format!("{s:?} is not a number"),
            }),
            Number::Float(x) if x.is_finite() => Ok(S::from_f64(*x)),
            Number::Float(x) => Err(Error::Schema {
                path: path.to_string(),
                message: format!("{x} is not finite"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexSection {
    pub vertices: Vec<Vec<Number>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(rename = "A")]
    pub a_matrix: Vec<Vec<Number>>,
    #[serde(rename = "B")]
    pub b_matrix: Vec<Vec<Number>>,
    pub a: Vec<Number>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Case tag the generator aimed for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub simplex: SimplexSection,
    pub system: SystemSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Problem<S> {
    pub simplex: Simplex<S>,
    pub system: AffineControlSystem<S>,
}

/// Deserializes JSON, reporting failures with the path of the offending field.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.as_ref().and_then(|m| m.name.as_deref())
    }

    pub fn new<S: Scalar>(
        vertices: &[Vector<S>],
        a: &Matrix<S>,
        b: &Matrix<S>,
        offset: &[S],
        metadata: Option<Metadata>,
    ) -> Self {
        let row = |v: &[S]| v.iter().map(Number::from_scalar).collect::<Vec<_>>();
        Self {
            n: offset.len(),
            simplex: SimplexSection {
                vertices: vertices.iter().map(|v| row(v)).collect(),
            },
            system: SystemSection {
                a_matrix: (0..a.rows()).map(|i| row(a.row(i))).collect(),
                b_matrix: (0..b.rows()).map(|i| row(b.row(i))).collect(),
                a: row(offset),
            },
            metadata,
        }
    }

    pub fn to_problem<S: Scalar>(&self, tol: &Tolerances) -> Result<Problem<S>> {
        let n = self.n;
        if n == 0 {
            return Err(schema("n", "dimension must be positive"));
        }
        let vertices = matrix_rows::<S>(&self.simplex.vertices, n + 1, Some(n), "simplex.vertices")?;
        let a = matrix_rows::<S>(&self.system.a_matrix, n, Some(n), "system.A")?;
        let b = matrix_rows::<S>(&self.system.b_matrix, n, None, "system.B")?;
        let m = b.first().map_or(0, Vec::len);
        let offset = vector::<S>(&self.system.a, n, "system.a")?;
        let simplex = Simplex::new(vertices, tol.rank).map_err(|e| match e {
            Error::DegenerateSimplex => schema("simplex.vertices", "vertices are affinely dependent"),
            other => other,
        })?;
        let system = AffineControlSystem::new(Matrix::from_rows(&a, n), Matrix::from_rows(&b, m), offset, tol.rank)?;
        Ok(Problem { simplex, system })
    }
}

fn schema(path: &str, message: &str) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn vector<S: Scalar>(row: &[Number], len: usize, path: &str) -> Result<Vector<S>> {
    if row.len() != len {
        return Err(schema(path, &format!("expected {len} entries, found {}", row.len())));
    }
    row.iter()
        .enumerate()
        .map(|(j, x)| x.to_scalar(&format!("{path}[{j}]")))
        .collect()
}

/// `rows` rows of equal length (`cols` when given).
fn matrix_rows<S: Scalar>(data: &[Vec<Number>], rows: usize, cols: Option<usize>, path: &str) -> Result<Vec<Vector<S>>> {
    if data.len() != rows {
        return Err(schema(path, &format!("expected {rows} rows, found {}", data.len())));
    }
    let width = cols.unwrap_or_else(|| data.first().map_or(0, Vec::len));
    data.iter()
        .enumerate()
        .map(|(i, r)| vector(r, width, &format!("{path}[{i}]")))
        .collect()
}
