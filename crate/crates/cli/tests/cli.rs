use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use abelfourier::formats::{emit_class, parse_class, parse_report_json};
use abelfourier::suite::Status;
use abelfourier::AbelianVariety;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelfourier")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn verify_all_on_genus_two() {
    let o = run(&["verify", "--genus", "2", "--checks", "all", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = parse_report_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(report.results.len(), 20);
    assert_eq!(report.status, Status::Pass);
    assert_eq!(report.conventions.ell_sign, 1);
}

#[test]
fn verify_single_check() {
    let o = run(&["verify", "--genus", "1", "--checks", "claim_star"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("claim_star"));
}

#[test]
fn text_and_json_verdicts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (j, t) = (path(dir.path(), "r.json"), path(dir.path(), "r.txt"));
    let checks = "beauville_exp,theta_divided,product_exchange";
    assert_eq!(code(&run(&["verify", "--genus", "2", "--checks", checks, "--format", "json", "--out", &j])), 0);
    assert_eq!(code(&run(&["verify", "--genus", "2", "--checks", checks, "--format", "text", "--out", &t])), 0);
    let report = parse_report_json(&fs::read_to_string(&j).unwrap()).unwrap();
    let text = fs::read_to_string(&t).unwrap();
    for r in &report.results {
        let line = text.lines().find(|l| l.contains(&r.name)).unwrap();
        assert!(line.contains(&r.status.as_str().to_uppercase()));
    }
}

#[test]
fn failing_check_exits_one() {
    let o = run(&["verify", "--genus", "2", "--checks", "beauville_exp", "--reverse-orientation", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let report = parse_report_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(report.results[0].witness.is_some());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, r#"{"name":"bad","genus":"1","polarization_matrix":[["1","1"],["-1","0"]]}"#).unwrap();
    let o = run(&["verify", "--variety", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotAlternating"));

    assert_eq!(code(&run(&["verify", "--genus", "2", "--checks", "nonsense"])), 2);
    assert_eq!(code(&run(&["verify", "--genus", "2", "--format", "yaml"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
    assert_eq!(code(&run(&["verify", "--genus", "2", "--type", "1,2,4"])), 2);
    assert_eq!(code(&run(&["verify", "--variety", &path(dir.path(), "missing.json")])), 2);
}

#[test]
fn fourier_of_exponential_theta() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (path(dir.path(), "x.json"), path(dir.path(), "y.json"));
    assert_eq!(code(&run(&["class", "--genus", "2", "--name", "exp_theta", "--out", &x])), 0);
    assert_eq!(code(&run(&["fourier", "--genus", "2", "--class", &x, "--out", &y])), 0);
    let a = AbelianVariety::standard_ppav(2).unwrap();
    let expected = (-a.dual().theta_class()).cup_exponential().unwrap();
    assert_eq!(fs::read_to_string(&y).unwrap(), emit_class(&expected));
}

#[test]
fn fourier_of_point_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y, z) = (path(dir.path(), "x.json"), path(dir.path(), "y.json"), path(dir.path(), "z.json"));
    assert_eq!(code(&run(&["class", "--genus", "3", "--name", "point", "--out", &x])), 0);
    assert_eq!(code(&run(&["fourier", "--genus", "3", "--class", &x, "--out", &y])), 0);
    let fy = parse_class(&fs::read_to_string(&y).unwrap()).unwrap();
    assert_eq!(fy, AbelianVariety::standard_ppav(3).unwrap().fundamental_class());
    assert_eq!(code(&run(&["fourier", "--genus", "3", "--class", &y, "--inverse", "--out", &z])), 0);
    assert_eq!(fs::read(&x).unwrap(), fs::read(&z).unwrap());
}

#[test]
fn fourier_rejects_mismatched_class() {
    let dir = tempfile::tempdir().unwrap();
    let x = path(dir.path(), "x.json");
    assert_eq!(code(&run(&["class", "--genus", "2", "--name", "theta", "--out", &x])), 0);
    let o = run(&["fourier", "--genus", "3", "--class", &x]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[RankMismatch]"));
}

#[test]
fn hodge_ranks_and_certificates() {
    let o = run(&["hodge", "--genus", "2", "--degree", "2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank: 4"));
    let o = run(&["hodge", "--genus", "2", "--degree", "0"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("rank: 1"));
    let o = run(&["hodge", "--genus", "3", "--degree", "4", "--beta-generators"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("cokernel trivial"));
}

#[test]
fn hodge_certify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = path(dir.path(), "gens.json");
    // 2·θ alone inside Hdg² of an elliptic curve leaves ℤ/2
    let a = AbelianVariety::standard_ppav(1).unwrap();
    let twice = a.theta_class().scale_i64(2);
    fs::write(&gens, format!("[{}]", emit_class(&twice))).unwrap();
    let o = run(&["hodge", "--genus", "1", "--degree", "2", "--certify-generators", &gens, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certificate"]["divisors"], serde_json::json!(["2"]));
}

#[test]
fn hodge_needs_complex_structure() {
    let dir = tempfile::tempdir().unwrap();
    let v = path(dir.path(), "v.json");
    fs::write(&v, r#"{"name":"bare","genus":"1","polarization_type":["1"]}"#).unwrap();
    let o = run(&["hodge", "--variety", &v, "--degree", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NoComplexStructure"));
}

#[test]
fn variety_export_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let v = path(dir.path(), "v.json");
    assert_eq!(code(&run(&["variety", "--type", "1,2", "--out", &v])), 0);
    let o = run(&["verify", "--variety", &v, "--checks", "fourier_involution,ell_integrality"]);
    assert_eq!(code(&o), 0);
}
