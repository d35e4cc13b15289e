use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn scm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scm"))
        .args(args)
        .env_remove("SCM_FIXTURE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn f2() -> String {
    data("f2_sto3g_frozencore_1.40.fcidump")
        .display()
        .to_string()
}

fn h2() -> String {
    data("h2_sto3g.fcidump").display().to_string()
}

#[test]
fn enumerate_prints_the_count_table() {
    let o = scm(&["enumerate", &f2(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let counts: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["configurations"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [65536, 120, 64, 12, 10]);
}

#[test]
fn enumerate_lists_determinants() {
    let o = scm(&["enumerate", &h2(), "--list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("qubits"));
    let s1 = scm(&["enumerate", &f2(), "--s", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&s1.stdout).unwrap();
    assert_eq!(v["rows"][4]["configurations"], 2);
}

#[test]
fn solve_reports_the_block_ground_state() {
    let o = scm(&["solve", &h2(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = v["ground_energy_hartree"].as_f64().unwrap();
    assert!((e + 1.137306035753).abs() < 1e-8);
    assert_eq!(v["qubits"], 1);
}

#[test]
fn pauli_writes_terms_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f2.pauli");
    let o = scm(&["pauli", &f2(), "-o", out.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["terms"], 136);
    assert_eq!(v["odd_y_terms"], 0);
    assert_eq!(v["complete"], true);
    assert_eq!(v["sound"], true);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(scm::paulifile::parse_pauli_sum(&text).unwrap().len(), 136);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    assert_eq!(
        scm(&["solve", "does-not-exist.fcidump"]).status.code(),
        Some(3)
    );
    assert_eq!(
        scm(&["solve", &h2(), "--irrep", "B1g"]).status.code(),
        Some(4)
    );
    assert_eq!(
        scm(&["solve", &h2(), "--irrep", "Q7"]).status.code(),
        Some(4)
    );
    assert_eq!(scm(&["pauli", &h2(), "--sz", "3"]).status.code(), Some(4));
    assert_eq!(
        scm(&["pauli", &h2(), "--padding", "lots"]).status.code(),
        Some(2)
    );
    assert_eq!(
        scm(&["vqe", "--restarts", "0", "--bond-lengths", "1.4"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "bogus = 1\n").unwrap();
    assert_eq!(
        scm(&["vqe", "-c", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let garbled = dir.path().join("garbled.fcidump");
    std::fs::write(&garbled, "not an fcidump\n").unwrap();
    assert_eq!(
        scm(&["solve", garbled.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn vqe_writes_traces_curve_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let fixtures = data("");
    let o = scm(&[
        "vqe",
        "--fixture-dir",
        fixtures.to_str().unwrap(),
        "--bond-lengths",
        "1.3,1.4",
        "--mode",
        "exact",
        "--iterations",
        "40",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "trace_1.30.json",
        "trace_1.40.json",
        "curve.csv",
        "manifest.json",
    ] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("trace_1.40.json")).unwrap())
            .unwrap();
    assert_eq!(trace["records"].as_array().unwrap().len(), 40);
    assert_eq!(trace["qubits"], 4);
    let curve = std::fs::read_to_string(out.join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 3);
    assert!(curve
        .lines()
        .next()
        .unwrap()
        .starts_with(scm::report::CURVE_HEADER));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);

    // same seeds, same numbers
    let again = dir.path().join("again");
    let o2 = scm(&[
        "vqe",
        "--fixture-dir",
        fixtures.to_str().unwrap(),
        "--bond-lengths",
        "1.3,1.4",
        "--mode",
        "exact",
        "--iterations",
        "40",
        "-o",
        again.to_str().unwrap(),
    ]);
    assert!(o2.status.success());
    assert_eq!(
        std::fs::read_to_string(out.join("curve.csv")).unwrap(),
        std::fs::read_to_string(again.join("curve.csv")).unwrap()
    );
}

#[test]
fn mitigate_demo_runs_on_h2() {
    let dir = tempfile::tempdir().unwrap();
    let cal = dir.path().join("cal.csv");
    let o = scm(&[
        "mitigate-demo",
        &h2(),
        "--trials",
        "10",
        "--calibration-csv",
        cal.to_str().unwrap(),
        "--json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trials"], 10);
    let csv = std::fs::read_to_string(cal).unwrap();
    assert_eq!(csv.lines().count(), 3);
}
