//! End-to-end tests of the binary's exit-code and output contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sorkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sorkin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sorkin_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sorkin"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn classical_campaign_reports_no_interference() {
    let out = sorkin(&["campaign", "--theory", "classical", "--trials", "200", "--seed", "7"]);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "NO_INTERFERENCE");
    assert_eq!(report["trials"], 200);
    assert!(report["manifest"]["tool_version"].is_string());
    assert_eq!(report["manifest"]["config"]["theory"], "classical");
}

#[test]
fn quantum_campaign_reports_second_order_only() {
    let out = sorkin(&["campaign", "--theory", "quantum", "--dim", "3", "--trials", "200", "--seed", "7"]);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "SECOND_ORDER_ONLY");
    assert_eq!(report["manifest"]["config"]["dimension"], 3);
}

#[test]
fn synthetic_campaign_reports_third_order() {
    let out = sorkin(&["campaign", "--theory", "synthetic", "--trials", "10", "--seed", "7"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout_json(&out)["verdict"], "THIRD_ORDER");
}

#[test]
fn verdict_mismatch_exits_with_code_two() {
    // an absurd significance threshold hides the designed I3 = 0.9
    let out = sorkin(&[
        "campaign", "--theory", "synthetic", "--trials", "10",
        "--significance-threshold", "2.0",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(stdout_json(&out)["verdict"], "NO_INTERFERENCE");
}

#[test]
fn usage_and_config_errors_exit_with_code_one() {
    for args in [
        &["campaign", "--theory", "quantum", "--dim", "2"][..],
        &["campaign", "--theory", "quantum", "--dim", "17"][..],
        &["campaign", "--theory", "classical", "--dim", "5"][..],
        &["campaign", "--theory", "classical", "--trials", "0"][..],
        &["campaign", "--theory", "classical", "--zero-threshold", "0.5"][..],
        &["campaign", "--theory", "pilot-wave"][..],
        &["no-such-subcommand"][..],
    ] {
        let out = sorkin(args);
        assert_eq!(exit_code(&out), 1, "args {args:?} should be a usage error");
    }
    let help = sorkin(&["--help"]);
    assert_eq!(exit_code(&help), 0);
}

#[test]
fn identical_seeds_give_identical_reports_outside_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.json");
    let path_b = dir.path().join("b.json");
    for path in [&path_a, &path_b] {
        let out = sorkin(&[
            "campaign", "--theory", "quantum", "--dim", "4", "--trials", "64",
            "--seed", "99", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    let mut a: Value = serde_json::from_str(&std::fs::read_to_string(&path_a).unwrap()).unwrap();
    let mut b: Value = serde_json::from_str(&std::fs::read_to_string(&path_b).unwrap()).unwrap();
    let manifest_a = a.as_object_mut().unwrap().remove("manifest").unwrap();
    let manifest_b = b.as_object_mut().unwrap().remove("manifest").unwrap();
    assert_eq!(a, b, "everything outside the manifest block is reproducible");
    // within the manifest only timing may differ
    assert_eq!(manifest_a["seed"], manifest_b["seed"]);
    assert_eq!(manifest_a["tool_version"], manifest_b["tool_version"]);
    // the two runs wrote to different paths, which the config echoes
    assert_ne!(manifest_a["config"]["output"], manifest_b["config"]["output"]);
}

#[test]
fn thread_count_override_does_not_change_the_report() {
    let baseline = sorkin(&["campaign", "--theory", "quantum", "--dim", "3", "--trials", "64", "--seed", "5"]);
    let single = sorkin_with_env(
        &["campaign", "--theory", "quantum", "--dim", "3", "--trials", "64", "--seed", "5"],
        "SORKIN_THREADS",
        "1",
    );
    assert_eq!(exit_code(&baseline), 0);
    assert_eq!(exit_code(&single), 0);
    let mut a = stdout_json(&baseline);
    let mut b = stdout_json(&single);
    a.as_object_mut().unwrap().remove("manifest");
    b.as_object_mut().unwrap().remove("manifest");
    assert_eq!(a, b);

    let bad = sorkin_with_env(
        &["campaign", "--theory", "classical", "--trials", "1"],
        "SORKIN_THREADS",
        "zero",
    );
    assert_eq!(exit_code(&bad), 1);
}

fn parse_residual(output: &Output) -> f64 {
    let text = String::from_utf8_lossy(&output.stdout);
    let line = text
        .lines()
        .find(|l| l.starts_with("max relative residual = "))
        .unwrap_or_else(|| panic!("no residual line in {text:?}"));
    line.trim_start_matches("max relative residual = ")
        .parse()
        .expect("residual parses")
}

#[test]
fn default_slits_run_prints_a_negligible_residual() {
    let out = sorkin(&["slits"]);
    assert_eq!(exit_code(&out), 0);
    assert!(parse_residual(&out) <= 1e-12);
}

#[test]
fn saturating_slits_run_prints_a_visible_residual_and_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("sat.toml");
    std::fs::write(
        &config_path,
        r#"
wavelength = 810e-9
slit_width = 30e-6
slit_centers = [-100e-6, 0.0, 100e-6]
screen_distance = 0.18
detector_min = -5e-3
detector_max = 5e-3
detector_count = 301
response = "SATURATING"
epsilon = 0.1
"#,
    )
    .unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let mut residuals = Vec::new();
    for csv in [&csv_a, &csv_b] {
        let out = sorkin(&[
            "slits",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
        residuals.push(parse_residual(&out));
    }
    assert!(residuals[0] > 1e-3);
    assert_eq!(residuals[0], residuals[1]);
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap(),
        "same config gives byte-identical CSV"
    );

    let manifest_path = dir.path().join("a.csv.manifest.json");
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["config"]["response"], "SATURATING");
    let digest = manifest["input_digests"][config_path.to_str().unwrap()]
        .as_str()
        .expect("config digest recorded");
    assert!(digest.starts_with("sha256:"));

    let csv_text = std::fs::read_to_string(&csv_a).unwrap();
    let header = csv_text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "x,P123,P12,P13,P23,P1,P2,P3,residual");
}

#[test]
fn malformed_configs_exit_with_a_named_line_numbered_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.toml");
    std::fs::write(&missing, "slit_width = 30e-6\n").unwrap();
    let out = sorkin(&["slits", "--config", missing.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("wavelength"), "names the missing key: {stderr}");

    let broken = dir.path().join("broken.toml");
    std::fs::write(&broken, "wavelength = \"oops\n").unwrap();
    let out = sorkin(&["slits", "--config", broken.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "line-numbered diagnostic: {stderr}");

    let absent = Path::new("/nonexistent/config.toml");
    let out = sorkin(&["slits", "--config", absent.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn verify_filter_selects_matching_suites() {
    let out = sorkin(&["verify", "--filter", "classical"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("classical-interference"));
    assert!(!stdout.contains("quantum-interference"));
    assert!(!stdout.contains("classification-matrix"));

    let none = sorkin(&["verify", "--filter", "no-such-suite"]);
    assert_eq!(exit_code(&none), 1);
}

#[test]
fn verify_runs_everything_and_passes() {
    let out = sorkin(&["verify"]);
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches(" PASS").count(), 9);
    assert_eq!(stdout.matches("FAIL").count(), 0);
}
