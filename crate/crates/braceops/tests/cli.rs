use std::process::Command;

fn braceops(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_braceops")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn verify_trivial_arity_passes() {
    let (code, out) = braceops(&["verify", "--suite", "all", "--max-n", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("verdict: pass\n"));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(braceops(&["verify", "--max-n", "6"]).0, 3);
    assert_eq!(braceops(&["dims", "--n", "0"]).0, 3);
    assert_eq!(braceops(&["verify", "--suite", "nonsense"]).0, 3);
    assert_eq!(braceops(&["frobnicate"]).0, 3);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(braceops(&["fixtures", "--dir", dir.path().to_str().unwrap()]).0, 3);
    assert_eq!(braceops(&["--help"]).0, 0);
}

#[test]
fn failing_fixture_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.fix"), "name: x\ninput: (delta (r (1 (2))))\nexpect: [+1 (r (* (1) (2)))]\n").unwrap();
    let (code, out) = braceops(&["fixtures", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL x"));
    assert!(out.contains("(r (* (2) (1)))"));
}

#[test]
fn dims_and_cohomology_reports() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let (code, out) = braceops(&["dims", "--n", "3", "--sector", "vbul", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "-1\t18\n0\t12\n");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,complex,degree,dim\n3,C(vbul),-1,18\n"));

    let json = dir.path().join("h.json");
    let (code, out) = braceops(&["cohomology", "--n", "3", "--which", "vcirc", "--dual", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("2\t6"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["complex"], "H(vcirc*)");
}

#[test]
fn verify_report_has_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, _) = braceops(&["verify", "--suite", "ger-relations", "--max-n", "3", "--threads", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["version", "n", "sign_convention", "dims", "pages", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["dims"]["n=3/H(br)"]["-2"], 2);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "ger-relations/jacobi" && c["status"] == "pass"));
    assert!(!dir.path().join("r.json.partial").exists());
}

#[test]
fn spectral_prints_every_page() {
    let (code, out) = braceops(&["spectral", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("E1: "));
    assert!(out.contains("Einf: "));
}
