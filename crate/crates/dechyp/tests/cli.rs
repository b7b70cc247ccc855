//! CLI behaviour: exit codes, report content, output files.

use std::path::{Path, PathBuf};
use std::process::Output;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_dechyp"))
        .args(args)
        .current_dir(fixtures_dir())
        .output()
        .expect("failed to spawn CLI")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_passes_on_fixtures() {
    for f in ["tri444.json", "cusp_torus.json", "flare_torus.json"] {
        let out = run(&["validate", f]);
        assert_eq!(out.status.code(), Some(0), "{f}: {}", stdout(&out));
        assert!(stdout(&out).contains("passed: true"));
    }
}

#[test]
fn validate_flags_unit_cone_weight() {
    let text = std::fs::read_to_string(fixtures_dir().join("tri444.json"))
        .unwrap()
        .replace("1.02", "1.0");
    let tmp = fixtures_dir().join("tmp_unit_cone.json");
    std::fs::write(&tmp, text).unwrap();
    let out = run(&["validate", "tmp_unit_cone.json"]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("unrealizable-cone-weight"));
}

#[test]
fn check_reports_flare_torus_diagonal_flat() {
    let out = run(&["check", "flare_torus.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let flat_line = text
        .lines()
        .find(|l| l.starts_with("edge: 1"))
        .expect("edge 1 missing");
    assert!(flat_line.ends_with("class: flat"), "{flat_line}");
}

#[test]
fn delaunay_reports_convergence_and_signature() {
    let out = run(&["delaunay", "tri444.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("converged: true"));
    assert!(text.contains("flips: 0"));
    assert!(text.contains("signature: "));
}

#[test]
fn fan_counts_four_tessellations() {
    let out = run(&["fan", "tri444.json", "--samples", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("distinct-maximal-tessellations: 4"),
        "{text}"
    );
}

#[test]
fn fan_writes_ternary_svg() {
    let target = std::env::temp_dir().join("dechyp_fan_test.svg");
    let _ = std::fs::remove_file(&target);
    let out = run(&["fan", "tri444.json", "--samples", "24", "-o", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&target).unwrap();
    std::fs::remove_file(&target).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("circle"));
}

#[test]
fn render_emits_svg() {
    let out = run(&["render", "cusp_torus.json", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("<svg"));
    assert!(text.contains("viewBox=\"-1.05 -1.05 2.1 2.1\""));
}

#[test]
fn hull_verify_passes_fixture() {
    let out = run(&["hull-verify", "orbit_tri444.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("passed: true"));
    assert!(text.contains("violations: 0"));
}

#[test]
fn usage_error_exits_64() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
}

#[test]
fn missing_file_exits_66() {
    assert_eq!(run(&["validate", "nope.json"]).status.code(), Some(66));
    assert_eq!(run(&["hull-verify", "nope.json"]).status.code(), Some(66));
}

#[test]
fn exhausted_flip_budget_exits_3() {
    // skewed cone weights need at least one flip; a zero budget cannot converge
    let text = std::fs::read_to_string(fixtures_dir().join("tri444.json"))
        .unwrap()
        .replacen("1.02", "1.8", 1);
    let tmp = fixtures_dir().join("tmp_skewed.json");
    std::fs::write(&tmp, text).unwrap();
    let needs_flips = run(&["delaunay", "tmp_skewed.json", "--max-flips", "0"]);
    let converges = run(&["delaunay", "tmp_skewed.json"]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(needs_flips.status.code(), Some(3), "{needs_flips:?}");
    assert_eq!(converges.status.code(), Some(0));
    assert!(stdout(&converges).contains("flips: 1"));
}

#[test]
fn malformed_file_exits_66() {
    let tmp = fixtures_dir().join("tmp_malformed.json");
    std::fs::write(&tmp, "{\"format\": \"dechyp-surface-v1\"").unwrap();
    let out = run(&["validate", "tmp_malformed.json"]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(out.status.code(), Some(66));
}

#[test]
fn golden_render_snapshot() {
    // snapshot of the cusp torus rendering, fixed at the first correct build
    let out = run(&["render", "cusp_torus.json"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixtures_dir().join("cusp_torus_render.svg")).unwrap();
    assert_eq!(stdout(&out), golden, "render output drifted from the golden snapshot");
}
