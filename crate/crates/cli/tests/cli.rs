use std::process::{Command, Output};

use qrf_core::expr::parse;
use qrf_core::qrf::{Particle, QrfWord, WordKind};
use serde_json::Value;

fn qrf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrf"))
        .args(args)
        .env("QRF_ASCII", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_object(o: &Output) -> Value {
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str::<Value>(err.trim()).unwrap()["error"].clone()
}

#[test]
fn commutator_prints_canonical_operator() {
    let o = qrf(&["commutator", "x_A*p_B", "(1/2)*(x_A*p_A+p_A*x_A)"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.trim(), "i*kappa*x_A*p_B");
    let p = parse(out.trim()).unwrap();
    assert_eq!(p.to_string(), out.trim());

    let o = qrf(&["commutator", "(1/2)*(x_A*p_A+p_A*x_A)", "x_A*p_B"]);
    assert_eq!(stdout(&o).trim(), "-i*kappa*x_A*p_B");
}

#[test]
fn commutator_accepts_generator_names() {
    let o = qrf(&["commutator", "D_A", "P_AB"]);
    assert_eq!(stdout(&o).trim(), "-i*kappa*x_A*p_B");
}

#[test]
fn syntax_error_is_structured() {
    let o = qrf(&["commutator", "x_A*(p_B", "x_B"]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_object(&o);
    assert_eq!(e["kind"], "syntax_error");
    assert_eq!(e["line"], 1);
    assert!(e["column"].as_u64().is_some());
}

#[test]
fn closure_of_the_dynamical_algebra() {
    let o = qrf(&["closure", "d7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with('[')).count(), 13);
    assert!(out.contains("PASS closure of d7"));
}

#[test]
fn closure_failure_from_a_file() {
    let dir = std::env::temp_dir().join(format!("qrf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("open.alg");
    std::fs::write(&path, "# not closed\nX := x_A*p_B\nY := p_A*x_B\n").unwrap();
    let o = qrf(&["closure", path.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(error_object(&o)["kind"], "closure_failure");
}

#[test]
fn subgroup_table_passes() {
    let o = qrf(&["table1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" -> ")).count(), 28);
}

#[test]
fn action_lines_reparse_in_the_target_chart() {
    for kind in WordKind::ALL {
        let o = qrf(&["qrf", kind.name(), "--from", "C", "--to", "A", "--action"]);
        assert!(o.status.success(), "{kind:?}");
        let chart = QrfWord::make(kind, Particle::C, Particle::A).unwrap().target_chart();
        for line in stdout(&o).lines().filter(|l| l.contains(" -> ")) {
            let rhs = line.split(" -> ").nth(1).unwrap();
            let p = chart.parse(rhs).unwrap();
            assert_eq!(chart.format(&p), rhs, "{line}");
        }
    }
}

#[test]
fn symmetry_exit_status_follows_the_check() {
    assert!(qrf(&["qrf", "ST", "--symmetry"]).status.success());
    let o = qrf(&["qrf", "Sx", "--symmetry"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_object(&o)["kind"], "check_failed");
}

#[test]
fn transitivity_and_factorization() {
    assert!(qrf(&["qrf", "ST", "--from", "A", "--to", "B", "--transitivity"])
        .status
        .success());
    let o = qrf(&["qrf", "SD", "--factorize"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("swap(CA)"));
    assert_eq!(qrf(&["qrf", "Sx", "--from", "A", "--to", "A"]).status.code(), Some(2));
}

#[test]
fn classical_limit_and_pole() {
    let o = qrf(&["limit", "--kappa0", "x_A*p_B"]);
    assert_eq!(stdout(&o).trim(), "cx_A*p_B");
    let o = qrf(&["limit", "--kappa0", "x_A/kappa"]);
    assert_eq!(error_object(&o)["kind"], "pole_at_kappa_zero");
}

#[test]
fn poincare_casimirs() {
    let o = qrf(&["poincare", "--casimirs"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("C = P0^2 - P1^2 - P2^2 = 0"));
}

#[test]
fn gaussian_invariance() {
    let o = qrf(&["gaussian", "--trials", "20", "--seed", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn ascii_mode_has_no_unicode() {
    let o = qrf(&["qrf", "ST", "--symmetry"]);
    assert!(stdout(&o).is_ascii());
    let fancy = Command::new(env!("CARGO_BIN_EXE_qrf"))
        .args(["qrf", "ST", "--symmetry"])
        .env_remove("QRF_ASCII")
        .output()
        .unwrap();
    assert!(!stdout(&fancy).is_ascii());
}

#[test]
fn verify_writes_a_sorted_report() {
    let dir = std::env::temp_dir().join(format!("qrf-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = qrf(&[
        "verify",
        "--only",
        "08",
        "--only",
        "01",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["01-r4-closure", "08-su11-central"]);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert!(c["source"].is_string() && c["elapsed_ms"].is_number());
    }
    assert!(v["seeds"]["invariance"].is_u64());
}
