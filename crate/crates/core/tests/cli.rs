use std::process::Command;

fn bergman(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bergman")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn kernel_at_origin() {
    let (code, out, _) = bergman(&["kernel", "--domain", "disc", "--z", "0"]);
    assert_eq!(code, 0);
    let re: f64 = out.trim().trim_end_matches("+0i").parse().unwrap();
    assert!((re - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
}

#[test]
fn berezin_of_one_is_one() {
    let (code, out, _) = bergman(&["berezin", "--domain", "disc", "--symbol", "one", "--z", "0.3+0.1i", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn norm_writes_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("norm.json");
    let (code, _, _) = bergman(&[
        "norm", "--domain", "disc", "--p", "inf", "--radial-n", "20", "--angular-n", "6",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["p"], "inf");
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn blowup_prints_csv_and_slope() {
    let (code, out, err) = bergman(&["blowup", "--eps", "1e-2,1e-3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("eps,norm_f,"));
    assert_eq!(out.lines().count(), 3);
    assert!(err.contains("slope"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(bergman(&["kernel", "--domain", "nowhere", "--z", "0"]).0, 2);
    assert_eq!(bergman(&["kernel", "--domain", "disc", "--z", "1.5"]).0, 2);
    assert_eq!(bergman(&["norm", "--p", "1"]).0, 2);
    assert_eq!(bergman(&["frobnicate"]).0, 2);
}
