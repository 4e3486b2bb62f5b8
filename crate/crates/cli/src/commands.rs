use std::path::Path;
use std::time::Instant;

use rcp_core::instance::InstanceFile;
use rcp_core::report::{Mode, ReportFile, VerifyFile};
use rcp_core::system::restriction_polytope;
use rcp_core::synthesis::{analyze as analyze_problem, Analyzed};
use rcp_core::verify::{check_certificate, sample_check};
use rcp_core::{synthesize as synthesize_problem, Rational, Scalar, SynthesisOptions, Tolerances, Verdict};

use crate::io;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_VACUOUS: u8 = 3;

pub fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Feasible => EXIT_OK,
        Verdict::Obstructed => EXIT_NEGATIVE,
        Verdict::Vacuous => EXIT_VACUOUS,
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, String> {
    let text = io::read(path)?;
    InstanceFile::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn label(path: &Path, inst: &InstanceFile) -> String {
    inst.name()
        .map(str::to_string)
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_default()
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn analyze(path: &Path, float: bool, tol: &Tolerances, timing: bool) -> Result<(String, u8), String> {
    let inst = load_instance(path)?;
    let mut report = if float {
        analyze_as::<f64>(&inst, tol)
    } else {
        analyze_as::<Rational>(&inst, tol)
    }?;
    report.instance = Some(label(path, &inst));
    if !timing {
        report.timing_ms = None;
    }
    let code = verdict_code(report.verdict);
    Ok((report.to_json(), code))
}

fn analyze_as<S: Scalar>(inst: &InstanceFile, tol: &Tolerances) -> Result<ReportFile, String> {
    let start = Instant::now();
    let problem = inst.to_problem::<S>(tol).map_err(|e| e.to_string())?;
    let analyzed: Analyzed<S> = analyze_problem(&problem.system, &problem.simplex, tol).map_err(|e| e.to_string())?;
    let mut report = ReportFile::from_analysis(&analyzed, tol).map_err(|e| e.to_string())?;
    report.timing_ms = Some(elapsed_ms(start));
    Ok(report)
}

/// Synthesizes one instance into a report.
pub fn synthesize_report(inst: &InstanceFile, float: bool, tol: &Tolerances, allow_constant: bool) -> Result<ReportFile, String> {
    if float {
        synthesize_as::<f64>(inst, tol, allow_constant)
    } else {
        synthesize_as::<Rational>(inst, tol, allow_constant)
    }
}

fn synthesize_as<S: Scalar>(inst: &InstanceFile, tol: &Tolerances, allow_constant: bool) -> Result<ReportFile, String> {
    let start = Instant::now();
    let problem = inst.to_problem::<S>(tol).map_err(|e| e.to_string())?;
    let opts = SynthesisOptions {
        tolerances: tol.clone(),
        allow_constant,
    };
    let result = synthesize_problem(&problem.system, &problem.simplex, &opts).map_err(|e| e.to_string())?;
    let mut report = ReportFile::from_synthesis(&result, tol);
    report.timing_ms = Some(elapsed_ms(start));
    Ok(report)
}

pub fn synthesize(
    path: &Path,
    float: bool,
    tol: &Tolerances,
    allow_constant: bool,
    timing: bool,
) -> Result<(String, u8), String> {
    let inst = load_instance(path)?;
    let mut report = synthesize_report(&inst, float, tol, allow_constant)?;
    report.instance = Some(label(path, &inst));
    if !timing {
        report.timing_ms = None;
    }
    let code = verdict_code(report.verdict);
    Ok((report.to_json(), code))
}

pub fn verify(
    instance: &Path,
    law: &Path,
    float: bool,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> Result<(String, u8), String> {
    let inst = load_instance(instance)?;
    let text = io::read(law)?;
    let report = ReportFile::from_json(&text).map_err(|e| format!("{}: {e}", law.display()))?;
    let mut out = if float {
        verify_as::<f64>(&inst, &report, tol, samples, seed)
    } else {
        verify_as::<Rational>(&inst, &report, tol, samples, seed)
    }
    .map_err(|e| format!("{}: {e}", law.display()))?;
    out.instance = Some(label(instance, &inst));
    let code = if out.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((out.to_json(), code))
}

fn verify_as<S: Scalar>(
    inst: &InstanceFile,
    report: &ReportFile,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> rcp_core::Result<VerifyFile> {
    let problem = inst.to_problem::<S>(tol)?;
    let law = report.parse_law::<S>(tol.rank)?;
    let g = restriction_polytope(&problem.system, &problem.simplex, tol)?;
    let certificate = check_certificate(&problem.simplex, &problem.system, &law, &g, tol)?;
    let sampling = sample_check(&problem.simplex, &law, samples, seed, tol)?;
    let passed = certificate.passed && sampling.passed;
    Ok(VerifyFile {
        mode: Mode::of::<S>(),
        instance: None,
        verdict: if passed { "pass" } else { "fail" }.to_string(),
        certificate,
        sampling,
        tolerances: tol.clone(),
    })
}
