use std::path::PathBuf;
use std::process::{Command, Output};

fn e510(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_e510")).args(args).env_remove("E510_THREADS").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("e510-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_single_family() {
    let out = e510(&["verify-catalog", "--family", "11", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["all_pass"], true);
    let f = &r["families"][0]["family"];
    assert_eq!(f["degree"], 11);
    assert_eq!(f["weight"], serde_json::json!([1, 0, 0, 0]));
    assert_eq!(f["mu"], serde_json::json!([0, 0, 0, 1]));
}

#[test]
fn verify_family_grid() {
    let out = e510(&["verify-catalog", "--family", "4E", "--n", "0..2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["families"].as_array().unwrap().len(), 3);
    let out = e510(&["verify-catalog", "--family", "all", "--m", "0..1", "--n", "0..1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn nondegenerate_module_is_empty() {
    let out = e510(&["search", "--mu", "0,1,1,0", "--degree", "1..4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!([]));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["search", "--mu", "0,0,0,1", "--degree", "12"][..],
        &["search", "--mu", "0,0,0,1", "--degree", "15", "--long"],
        &["search", "--mu", "0,0,0,1", "--degree", "9", "--ceiling", "8"],
        &["search", "--mu", "-1,0,0,0", "--degree", "1"],
        &["search", "--mu", "0,0,0,1", "--degree", "0"],
        &["search", "--mu", "0,0,0,1", "--degree", "3..1"],
        &["search", "--mu", "1,0,0,0", "--degree", "2", "--dim-cap", "3"],
        &["verify-catalog", "--family", "9Z"],
        &["verify-catalog", "--threads", "0"],
        &["dual"],
        &["frobnicate"],
    ] {
        assert_eq!(e510(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_is_identical_across_thread_counts() {
    let a = e510(&["search", "--mu", "0,0,0,1", "--degree", "1..3", "--format", "json", "--threads", "1"]);
    let b = e510(&["search", "--mu", "0,0,0,1", "--degree", "1..3", "--format", "json", "--threads", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = e510(&["complexes", "--max-param", "1", "--format", "json", "--threads", "1"]);
    let b = e510(&["complexes", "--max-param", "1", "--format", "json", "--threads", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certificates_feed_the_dual_check() {
    let certs = scratch("certs.json");
    let out = e510(&["search", "--mu", "0,0,0,0", "--degree", "1..2", "--output", certs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = e510(&["dual", "--from-certs", certs.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["all_found"], true);
    assert_eq!(r["pairs"][0]["dual_mu"], serde_json::json!([0, 0, 1, 0]));
}

#[test]
fn missing_dual_partner_is_a_failure() {
    // no singular vector of degree 1 lives in M(0,0,1,1) with weight (0,1,1,0)*
    let mut cert: serde_json::Value = serde_json::from_slice(
        &e510(&["search", "--mu", "0,0,0,0", "--degree", "1", "--format", "json"]).stdout,
    )
    .unwrap();
    cert[0]["mu"] = serde_json::json!([0, 1, 1, 0]);
    cert[0]["weight"] = serde_json::json!([1, 1, 0, 0]);
    let path = scratch("forged.json");
    std::fs::write(&path, cert.to_string()).unwrap();
    let out = e510(&["dual", "--from-certs", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("MISSING"));
}

#[test]
fn checkpointed_search_resumes() {
    let cp = scratch("cp.json");
    let _ = std::fs::remove_file(&cp);
    let args = ["search", "--mu", "0,0,0,2", "--degree", "7", "--format", "json", "--checkpoint", cp.to_str().unwrap()];
    let a = e510(&args);
    assert!(cp.exists());
    let b = e510(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let certs = json(&a);
    assert_eq!(certs.as_array().unwrap().len(), 1);
    assert_eq!(certs[0]["weight"], serde_json::json!([2, 0, 0, 0]));
}

#[test]
fn suites_pass() {
    for args in [
        &["identities", "--suite", "omega", "--max-d", "4"][..],
        &["identities", "--suite", "chain"],
        &["s5"],
        &["sweep", "--budget", "1", "--degree-max", "3"],
        &["selftest", "--random", "500", "--weyl-cap", "100"],
    ] {
        let out = e510(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}
