use std::fs;
use std::process::{Command, Output};

use caprise_harness::error::{Error, EXIT_INVALID, EXIT_NUMERICAL};

fn caprise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caprise")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn steady_reports_heights() {
    let v = json(&caprise(&["steady", "--omega", "1", "--sigma", "0.04"]));
    assert!((v["h_jurin"].as_f64().unwrap() - 0.02).abs() < 1e-12);
    assert!((v["h_inf"].as_f64().unwrap() - 0.0191605).abs() < 1e-7);
    assert!((v["h_hat"].as_f64().unwrap() / 0.005 - 0.1678937).abs() < 1e-7);
}

#[test]
fn params_and_cost_rows() {
    let v = json(&caprise(&["params", "--omega", "10", "--sigma", "0.01"]));
    assert!((v["rho"].as_f64().unwrap() - 3.3255).abs() < 1e-4);
    assert!((v["g"].as_f64().unwrap() - 26.042).abs() < 1e-3);
    assert!((v["eo"].as_f64().unwrap() - 0.217).abs() < 1e-3);
    assert!(v["ca_max"].as_f64().unwrap() > 0.0);

    let v = json(&caprise(&["cost", "--omega", "1", "--sigma", "0.04", "--cells", "32"]));
    assert!((v["n_star_cells"].as_f64().unwrap() - 58.0).abs() < 0.1);
    assert!((v["n_steps_sigma"]["II"].as_f64().unwrap() - 2758.0).abs() < 3.0);
    assert!((v["n_steps_mu"]["II"].as_f64().unwrap() - 2048.0).abs() < 3.0);
}

#[test]
fn ode_scale_compare_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let out = caprise(&["ode", "--model", "extended", "--omega", "1", "--sigma", "0.04"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,h,hdot\n"));
    assert_eq!(text.lines().count(), 2002);

    for model in ["classical", "extended"] {
        let out = caprise(&[
            "ode", "--model", model, "--omega", "1", "--sigma", "0.04", "--t-end", "0.5", "--out",
            &d(&format!("{model}.csv")),
        ]);
        assert!(out.status.success());
    }
    let v = json(&caprise(&["compare", "--a", &d("classical.csv"), "--b", &d("extended.csv")]));
    assert!(v["l2_rel"].as_f64().unwrap() > 0.0);
    assert!(v["peak_count_b"].as_u64().unwrap() >= 1);

    let out = caprise(&[
        "scale", "--input", &d("extended.csv"), "--scaling", "II", "--omega", "1", "--sigma", "0.04",
        "--out", &d("scaled.csv"),
    ]);
    assert!(out.status.success());
    let scaled = fs::read_to_string(d("scaled.csv")).unwrap();
    let first = scaled.lines().nth(1).unwrap();
    // h* = c·h with c = 1/(2R·… ) = 50 1/m for this row, so h0 = 0.01 m maps to 0.5.
    assert_eq!(first, "0.0000000000000000e0,5.0000000000000000e-1,0.0000000000000000e0");
    let side: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d("scaled.json")).unwrap()).unwrap();
    assert_eq!(side["representation"]["scaling"], "II");
}

#[test]
fn sim2d_writes_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sim.csv");
    let v = json(&caprise(&[
        "sim2d", "--omega", "1", "--sigma", "0.04", "--cells-per-radius", "4", "--slip", "navier:0.001",
        "--t-end", "0.02", "--out", path.to_str().unwrap(),
    ]));
    assert!(v["n_steps"].as_u64().unwrap() > 0);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 502);
}

#[test]
fn bench_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let v = json(&caprise(&[
            "bench", "--suite", "omega-study", "--scalings", "none,II", "--out-dir",
            dir.path().to_str().unwrap(),
        ]));
        assert_eq!(v["runs"], 10);
        assert_eq!(v["files"], 21);
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 41);
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap());
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| caprise(args).status.code().unwrap();
    assert_eq!(code(&["steady", "--omega", "-1", "--sigma", "0.04"]), EXIT_INVALID);
    assert_eq!(code(&["steady", "--omega", "1"]), EXIT_INVALID);
    assert_eq!(code(&["frobnicate"]), EXIT_INVALID);
    assert_eq!(code(&["sim2d", "--omega", "1", "--sigma", "0.04", "--cells-per-radius", "4", "--slip", "navier:-1", "--out", "x"]), EXIT_INVALID);
    assert_eq!(code(&["bench", "--suite", "other", "--out-dir", "/tmp/x"]), EXIT_INVALID);
    assert_eq!(code(&["compare", "--a", "/nonexistent.csv", "--b", "/nonexistent.csv"]), EXIT_INVALID);
    assert_eq!(code(&["ode", "--model", "classical", "--omega", "1", "--sigma", "0.04", "--h0", "0"]), EXIT_INVALID);

    let numerical = Error::Model(caprise_core::Error::StepSizeUnderflow { t: 0.0, dt: 0.0 });
    assert_eq!(numerical.exit_code(), EXIT_NUMERICAL);
    let grid = Error::Grid(caprise_vof2d::Error::CourantViolation { cfl: 2.0 });
    assert_eq!(grid.exit_code(), EXIT_NUMERICAL);
}
