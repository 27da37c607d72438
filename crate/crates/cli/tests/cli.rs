use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abbvloc"))
        .args(args)
        .env_remove("ABBVLOC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exact_line(out: &Output) -> String {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix("exact: "))
        .unwrap_or_default()
        .to_string()
}

fn error_kind(out: &Output) -> String {
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("error is JSON");
    err["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn volume_sphere_weights_one_two() {
    let out = run(&["volume-sphere", "--weights", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(exact_line(&out), "1 * pi^2");
}

#[test]
fn stiefel_at_standard_reeb() {
    let out = run(&["stiefel", "--w", "0,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(exact_line(&out), "2/3 * pi^4");
}

#[test]
fn check_w1_all_pass() {
    let out = run(&["check-w1", "--m", "3", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[pass]"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn toric_and_msy_on_conifold() {
    let out = run(&["volume-toric", "--cone", &data("conifold_cone.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(exact_line(&out), "16/27 * pi^3");
    let out = run(&["msy-check", "--cone", &data("conifold_cone.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn polytope_commands_on_triangle() {
    let out = run(&["polytope-volume", "--polytope", &data("triangle.json")]);
    assert_eq!(exact_line(&out), "1/2 * pi^0");
    let out = run(&[
        "lawrence",
        "--polytope",
        &data("triangle.json"),
        "--u",
        "1,2,5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(exact_line(&out), "1/2 * pi^0");
    let out = run(&["lawrence", "--cone", &data("s5_cone.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn secondary_spot_value() {
    let out = run(&["secondary", "--w", "1,2", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(exact_line(&out), "9/2 * pi^0");
}

#[test]
fn homogeneous_builtin_and_file_agree() {
    let a = run(&[
        "homogeneous",
        "--builtin",
        "stiefel-so5-so3",
        "--b-prime",
        "1/2,1/3,2",
    ]);
    let b = run(&[
        "homogeneous",
        "--roots",
        &data("stiefel_roots.json"),
        "--b-prime",
        "1/2,1/3,2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(exact_line(&a), "8/175 * pi^4");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dh_reports_constant_coefficients() {
    let out = run(&["dh", "--system", &data("s3_system.json"), "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c_1  1 * pi^2"));
    assert!(text.contains("c_3"));
}

#[test]
fn corrupted_system_exits_one() {
    let out = run(&[
        "check-v-independence",
        "--system",
        &data("corrupted_system.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn input_errors_exit_two_with_kind() {
    let cases = [
        ("non_primitive_cone.json", "NonPrimitiveNormal"),
        ("index_two_cone.json", "GoodnessViolation"),
    ];
    for (file, kind) in cases {
        let out = run(&["volume-toric", "--cone", &data(file)]);
        assert_eq!(out.status.code(), Some(2), "{file}");
        assert_eq!(error_kind(&out), kind);
        assert!(out.stdout.is_empty());
    }
    let out = run(&["localize", "--system", &data("triangle.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "SchemaViolation");
    let out = run(&["localize", "--system", "/no/such/file.json"]);
    assert_eq!(error_kind(&out), "Io");
    let out = run(&["secondary", "--w", "1,2,3", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_per_seed() {
    let args = ["msy-check", "--cone", &data("s5_cone.json"), "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["check-w1", "--m", "2", "--trials", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn seed_env_overrides_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_abbvloc"))
        .args(["volume-sphere", "--weights", "1,2"])
        .env("ABBVLOC_SEED", "99")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("seed: 99"));
    let out = run(&["volume-sphere", "--weights", "1,2"]);
    assert!(stdout(&out).contains("seed: 42"));
}

#[test]
fn json_mode() {
    let out = run(&["--json", "volume-sphere", "--weights", "1,1,2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"], "1/2 * pi^3");
    assert_eq!(v["seed"], 42);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
    let decimal: f64 = v["decimal"].as_str().unwrap().parse().unwrap();
    assert!((decimal - std::f64::consts::PI.powi(3) / 2.0).abs() < 1e-9);
}

#[test]
fn system_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_abbvloc"))
        .args(["localize", "--system", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read(data("s3_system.json")).unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(exact_line(&out), "1 * pi^2");
}
