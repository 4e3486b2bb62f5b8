//! Reach control on simplices: affine obstruction analysis and synthesis of
//! continuous state feedback for `x' = A x + B u + a` that drives every state
//! of a simplex out through a prescribed exit facet.

pub mod error;
pub mod feasibility;
pub mod gen;
pub mod geometry;
pub mod instance;
pub mod law;
pub mod linalg;
pub mod lp;
pub mod report;
pub mod scalar;
pub mod synthesis;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{HalfspaceCone, IndexSet, Simplex};
pub use linalg::{Matrix, Vector};
pub use scalar::{Rational, Scalar, Tolerances};
pub use system::{AffineControlSystem, CaseLabel, CaseTag, RestrictionPolytope, Shape};
pub use synthesis::{synthesize, SynthesisOptions, SynthesisResult, Verdict};
