use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/planar_segment.json")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn synthesize_fixture_is_feasible_with_constant_law() {
    let out = rcp(&["synthesize", path_str(&fixture()), "--no-timing"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "feasible");
    assert_eq!(report["case"]["tag"], "N2_D1B1");
    assert_eq!(report["construction"]["name"], "constant-witness");
    let values = report["law"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0], values[1]);
    assert!(report.get("timing_ms").is_none());
}

#[test]
fn float_mode_agrees_on_fixture() {
    let out = rcp(&["synthesize", path_str(&fixture()), "--float", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["mode"], "float");
    assert_eq!(report["verdict"], "feasible");
}

#[test]
fn analyze_reports_cone_condition() {
    let out = rcp(&["analyze", path_str(&fixture()), "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["cone"]["condition"], true);
    assert!(report.get("law").is_none());
}

#[test]
fn verify_rejects_corrupted_law() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = rcp(&["synthesize", path_str(&fixture()), "-o", path_str(&report_path)]);
    assert_eq!(out.status.code(), Some(0));

    let ok = rcp(&["verify", path_str(&fixture()), path_str(&report_path)]);
    assert_eq!(ok.status.code(), Some(0));

    let mut report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    // f(o_1) = -e1 points out of the cone at a vertex on F_1.
    report["law"]["values"][0] = serde_json::json!(["-1", "0"]);
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    let bad = rcp(&["verify", path_str(&fixture()), path_str(&bad_path)]);
    assert_eq!(bad.status.code(), Some(2));
    let verdict: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(verdict["verdict"], "fail");
}

#[test]
fn schema_error_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture()).unwrap().replace("\"-1/4\"", "\"minus a quarter\"");
    let path = dir.path().join("broken.json");
    fs::write(&path, text).unwrap();
    let out = rcp(&["synthesize", path_str(&path)]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("system.a[1]"), "{stderr}");
}

#[test]
fn unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture()).unwrap().replacen('{', "{\"extra\": 1,", 1);
    let path = dir.path().join("extra.json");
    fs::write(&path, text).unwrap();
    let out = rcp(&["analyze", path_str(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("extra"));
}

#[test]
fn gen_is_deterministic() {
    let a = rcp(&["gen", "--n", "3", "--case", "N3_D2B2_QUAD", "--seed", "7"]);
    let b = rcp(&["gen", "--n", "3", "--case", "n3_d2b2_quad", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = rcp(&["gen", "--n", "3", "--case", "N3_D2B2_QUAD", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_rejects_bad_dimension() {
    let out = rcp(&["gen", "--n", "5", "--case", "N3_D2B2_QUAD"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn exit_code_follows_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for seed in 0..12 {
        let path = dir.path().join(format!("sym{seed}.json"));
        let seed = seed.to_string();
        rcp(&["gen", "--n", "3", "--case", "N3_D2B2_SYM_TRI", "--seed", &seed, "-o", path_str(&path)]);
        let out = rcp(&["synthesize", path_str(&path), "--no-timing"]);
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let expected = match report["verdict"].as_str().unwrap() {
            "feasible" => 0,
            "obstructed" => 2,
            other => panic!("unexpected verdict {other}"),
        };
        assert_eq!(out.status.code(), Some(expected));
        seen.push(expected);
    }
    assert!(seen.contains(&0) && seen.contains(&2), "{seen:?}");
}

#[test]
fn vacuous_instance_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // A x + a never lies in span{e1}: the second component is always 1.
    let text = r#"{
        "n": 2,
        "simplex": { "vertices": [["0", "0"], ["1", "0"], ["0", "1"]] },
        "system": { "A": [["1", "0"], ["0", "0"]], "B": [["1"], ["0"]], "a": ["0", "1"] }
    }"#;
    let path = dir.path().join("vacuous.json");
    fs::write(&path, text).unwrap();
    let out = rcp(&["synthesize", path_str(&path)]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["vacuous_reason"], "empty-equilibrium-set");
}

#[test]
fn batch_writes_sorted_csv_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("in");
    fs::create_dir(&inputs).unwrap();
    for (name, tag, seed) in [("b.json", "N3_D2B1", "2"), ("a.json", "N3_D2B2_EDGE_TRI", "3")] {
        let p = inputs.join(name);
        let out = rcp(&["gen", "--n", "3", "--case", tag, "--seed", seed, "-o", path_str(&p)]);
        assert_eq!(out.status.code(), Some(0));
    }
    fs::write(inputs.join("c.json"), "{ not json").unwrap();
    let csv_path = dir.path().join("summary.csv");
    let reports = dir.path().join("reports");
    let out = rcp(&[
        "batch",
        path_str(&inputs),
        "--jobs",
        "2",
        "--no-timing",
        "-o",
        path_str(&csv_path),
        "--reports",
        path_str(&reports),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "instance,case,verdict,runtime_ms");
    assert!(lines[1].starts_with("a.json,N3_D2B2_EDGE_TRI,feasible,"));
    assert!(lines[2].starts_with("b.json,N3_D2B1,"));
    assert_eq!(lines[3], "c.json,,error,");
    assert!(reports.join("a.json").exists());
    assert!(!reports.join("c.json").exists());
}

#[test]
fn plot_emits_svg_for_both_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    rcp(&["synthesize", path_str(&fixture()), "-o", path_str(&report)]);
    let svg = rcp(&["plot", path_str(&fixture()), path_str(&report)]);
    assert_eq!(svg.status.code(), Some(0));
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("marker-end"));

    let inst = dir.path().join("q.json");
    rcp(&["gen", "--n", "3", "--case", "N3_D2B2_QUAD", "--seed", "4", "-o", path_str(&inst)]);
    let r3 = dir.path().join("q_report.json");
    rcp(&["synthesize", path_str(&inst), "-o", path_str(&r3)]);
    let svg3 = rcp(&["plot", path_str(&inst), path_str(&r3)]);
    assert_eq!(svg3.status.code(), Some(0));
    let text3 = String::from_utf8(svg3.stdout).unwrap();
    assert!(text3.contains("xz plane"));
}

#[test]
fn tolerance_override_parses() {
    let ok = rcp(&["analyze", path_str(&fixture()), "--float", "--tol", "feas=1e-8"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = rcp(&["analyze", path_str(&fixture()), "--tol", "nonsense=1"]);
    assert_eq!(bad.status.code(), Some(1));
}
