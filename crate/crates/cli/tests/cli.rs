//! End-to-end checks of the binary: exit codes, report shape, determinism.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_g2kummer"))
}

#[test]
fn group_suite_passes_with_exit_zero() {
    let out = bin().args(["group"]).output().expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] group.quotient_order"));
    assert!(text.contains("summary:"));
}

#[test]
fn bad_config_exits_two() {
    let out = bin()
        .args(["group", "--config", "/nonexistent/path.json"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["rep", "--theta", "not-a-number"]).output().expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_is_deterministic_modulo_timestamp() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("g2kummer_report_a.json");
    let p2 = dir.join("g2kummer_report_b.json");
    for p in [&p1, &p2] {
        let out = bin()
            .args([
                "contraction",
                "--seed",
                "7",
                "--json",
                p.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
    }
    let strip = |p: &Path| {
        let text = std::fs::read_to_string(p).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(&p1), strip(&p2));
    // schema marker and seed echo
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&p1).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert!(v["checks"].as_array().map(|a| !a.is_empty()).unwrap_or(false));
}

#[test]
fn exact_theta_flag_runs_cyclotomic_checks() {
    let out = bin()
        .args(["rep", "--theta", "exact:1/4"])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("rep.descends[zeta4^1]"));
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir();
    let cfg_path = dir.join("g2kummer_cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"thetas": [0.9], "seed": 3, "genericity_samples": 200}"#,
    )
    .unwrap();
    let out = bin()
        .args(["quiver", "--config", cfg_path.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
