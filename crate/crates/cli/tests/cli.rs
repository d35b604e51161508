use serde_json::Value;
use std::process::{Command, Output};

fn wavesym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavesym")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = wavesym(&full);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("invalid JSON ({e}): {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

#[test]
fn invariance_pass_exits_zero() {
    let o = wavesym(&["check-invariance", "--f", "u^(-4)", "--g", "0", "--field", "t=2*t, x=0, u=u"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn invariance_fail_exits_one() {
    let o = wavesym(&["check-invariance", "--f", "u^(-4)", "--g", "0", "--field", "t=x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn parse_error_exits_two() {
    assert_eq!(wavesym(&["solve", "--f", "u^(", "--g", "0"]).status.code(), Some(2));
    assert_eq!(wavesym(&["check-invariance", "--f", "1", "--g", "0", "--field", "q=1"]).status.code(), Some(2));
    assert_eq!(wavesym(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn solve_case_19d_has_five_fields() {
    let o = wavesym(&["solve", "--f", "u^4", "--g", "0", "--degree", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("5 basis fields"), "{}", stdout(&o));
    let (code, v) = json(&["solve", "--f", "u^4", "--g", "0", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["dim"], 5);
    assert_eq!(v["basis"].as_array().unwrap().len(), 5);
    assert_eq!(v["closed"], true);
}

#[test]
fn profile_falls_back_to_float_for_exponentials() {
    let (code, v) = json(&["profile", "--f", "-1", "--g", "exp(u)", "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["profile"], serde_json::json!([2, 4, 6, 8]));
    let o = wavesym(&["profile", "--f", "1", "--g", "exp(u)", "--degree", "1", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pushforward_with_branch_limited_inverse() {
    let args = [
        "pushforward",
        "--f",
        "-1",
        "--g",
        "exp(-2*x)*u^3",
        "--map",
        "t=exp(-x)*sin(t), x=exp(-x)*cos(t)",
        "--inverse",
        "t=arctan(t/x), x=-ln(t^2 + x^2)/2",
        "--sample-scale",
        "1/4",
    ];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["f"], "-1");
}

#[test]
fn verify_admissible_reports_failures() {
    let base = ["verify-admissible", "--f", "1", "--g", "u^3", "--target-f", "1", "--target-g", "u^3"];
    let mut boost = base.to_vec();
    boost.extend(["--map", "t=5/4*t + 3/4*x, x=3/4*t + 5/4*x"]);
    assert_eq!(wavesym(&boost).status.code(), Some(0));
    let mut stretch = base.to_vec();
    stretch.extend(["--map", "t=2*t"]);
    let (code, v) = json(&stretch);
    assert_eq!(code, 1);
    assert_eq!(v["report"]["holds"], false);
}

#[test]
fn commutators_of_generators() {
    let o = wavesym(&["commutators", "--field", "D(x)", "--field", "Z(x^2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[D(x), Z(x^2)] = (3/2)*x^2*d_u - 3*f*d_g");
}

#[test]
fn invariants_of_sl2_realization() {
    let (code, v) = json(&["algebra-invariants", "--field", "t=1", "--field", "t=t, x=x, u=-2", "--field", "t=t^2 + x^2, x=2*t*x, u=-4*t"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["dim"], 3);
    assert_eq!(v["invariants"]["derived_dim"], 3);
    assert_eq!(v["invariants"]["killing_signature"], serde_json::json!([2, 0, 1]));
}

#[test]
fn catalog_export_is_json() {
    let (code, v) = json(&["catalog", "export", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 39);
}

#[test]
fn output_is_deterministic_under_seed() {
    let args = ["--json", "check-invariance", "--f", "u", "--g", "0", "--field", "t=x", "--seed", "7"];
    assert_eq!(stdout(&wavesym(&args)), stdout(&wavesym(&args)));
}
