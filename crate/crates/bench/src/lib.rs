//! Fixtures shared by the benchmarks.

use rcp_core::instance::Problem;
use rcp_core::{CaseTag, Scalar, Tolerances};

/// A generated instance of the given case, parsed with backend `S`.
pub fn problem<S: Scalar>(n: usize, tag: CaseTag, seed: u64) -> Problem<S> {
    rcp_core::gen::generate(n, tag, seed)
        .and_then(|file| file.to_problem(&Tolerances::default()))
        .expect("generated instances parse")
}

/// One representative per synthesis arm.
pub const CASES: [(usize, CaseTag); 6] = [
    (2, CaseTag::N2D1B1),
    (3, CaseTag::N3D1B2),
    (3, CaseTag::N3D2B2SymTri),
    (3, CaseTag::N3D2B2EdgeTri),
    (3, CaseTag::N3D2B2VertexTri),
    (3, CaseTag::N3D2B2Quad),
];
