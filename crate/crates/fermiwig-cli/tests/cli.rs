use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermiwig")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden() -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/m2_rational_sqrt2.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn scratch_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fermiwig-cli-{}-{name}", std::process::id()))
}

#[test]
fn default_run_matches_golden_report() {
    let o = run(&["verify", "--no-timings", "--json"]);
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got, golden());
    assert_eq!(o.status.code(), Some(1), "the default run contains failing checks");
}

#[test]
fn golden_failures_are_the_known_ones() {
    let g = golden();
    let mut failed: Vec<&str> = g["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    failed.sort();
    assert_eq!(failed, ["completeness = Λ_fin", "normalization |1⟩⟨1|", "trace â†0â0", "trace â†1â1"]);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let one = Command::new(env!("CARGO_BIN_EXE_fermiwig"))
        .args(["verify", "--suite", "commutators", "--suite", "overlaps", "--no-timings", "--json", "--seed", "5"])
        .env("FERMIWIG_WORKERS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_fermiwig"))
        .args(["verify", "--suite", "commutators", "--suite", "overlaps", "--no-timings", "--json", "--seed", "5"])
        .env("FERMIWIG_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(stdout(&one), stdout(&many));
    assert_eq!(one.status.code(), Some(0));
}

#[test]
fn seed_changes_random_draws() {
    let a = run(&["verify", "--suite", "overlaps", "--samples", "2", "--no-timings", "--json", "--seed", "1"]);
    let b = run(&["verify", "--suite", "overlaps", "--samples", "2", "--no-timings", "--json", "--seed", "2"]);
    assert_eq!(a.status.code(), Some(0));
    let (a, b): (serde_json::Value, serde_json::Value) =
        (serde_json::from_str(&stdout(&a)).unwrap(), serde_json::from_str(&stdout(&b)).unwrap());
    assert_eq!(a["checks"].as_array().unwrap().len(), b["checks"].as_array().unwrap().len());
    assert_ne!(a["seed"], b["seed"]);
}

#[test]
fn passing_selection_exits_zero() {
    let o = run(&["verify", "--suite", "car", "--suite", "bogoliubov"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn config_file_and_out_file() {
    let cfg = scratch_path("scenario.json");
    let out = scratch_path("report.json");
    std::fs::write(
        &cfg,
        r#"{"modes": {"k_points": 2}, "ring": "rational", "suites": ["car", "h-odes"], "seed": 3, "samples": 2}"#,
    )
    .unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["ring"], "rational");
    assert_eq!(report["modes"], serde_json::json!([2, 2]));
    assert_eq!(report["timings"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_file(cfg);
    let _ = std::fs::remove_file(out);
}

#[test]
fn config_errors_exit_two() {
    let cfg = scratch_path("bad.json");
    std::fs::write(&cfg, r#"{"modes": {"k_points": 1}, "ring": "rational", "colour": "red"}"#).unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
    let _ = std::fs::remove_file(cfg);

    let o = run(&["verify", "--ring", "float", "--suite", "bogoliubov"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("incompatible"), "{}", stderr(&o));

    let o = run(&["verify", "--modes", "7,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("memory guard"), "{}", stderr(&o));

    let o = run(&["verify", "--modes", "1,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("epsilon"), "{}", stderr(&o));

    let o = run(&["verify", "--suite", "nonesuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn overlap_table() {
    let o = run(&["overlap", "--c1", "1", "--c2", "-1", "--t", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("d   = (3/4,0)"), "{s}");
    assert!(s.contains("h1            = (2/3,0)"), "{s}");
    assert!(s.contains("direct == analytic"), "{s}");
}

#[test]
fn overlap_singular_point() {
    let o = run(&["overlap", "--c1", "1", "--c2", "-1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("singular"), "{}", stderr(&o));
    let o = run(&["overlap", "--c1", "2", "--c2", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn wigner_of_number_operator() {
    let o = run(&["wigner", "--op", "a+0 a0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("W = (1/2,0) "), "{s}");
    assert!(s.contains("weyl roundtrip ok"), "{s}");
}

#[test]
fn wigner_accepts_canonical_form() {
    let o = run(&["wigner", "--op", "op 2 | [(1,0)] a+0 a0"]);
    let p = run(&["wigner", "--op", "n0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&p));
}

#[test]
fn wigner_parse_error() {
    let o = run(&["wigner", "--op", "a0 + b1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at 5"), "{}", stderr(&o));
    let o = run(&["wigner", "--op", "a7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("out of range"), "{}", stderr(&o));
}

#[test]
fn weyl_roundtrip() {
    let o = run(&["weyl", "--w", "q0 p1 - 1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("op 2 |"), "{s}");
    assert!(s.contains("wigner roundtrip ok"), "{s}");
}

#[test]
fn star_products() {
    for ops in ["a0,a+0", "q0,p1", "a+0 a1,a+1 a0,n0", "q0 q1,p0,1/2 + a1"] {
        let o = run(&["star", "--ops", ops]);
        assert_eq!(o.status.code(), Some(0), "{ops}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("star product == Wigner"), "{ops}");
    }
    let o = run(&["star", "--ops", "a0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suites_listing() {
    let o = run(&["suites"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["car", "delta", "wigner", "star"] {
        assert!(s.contains(name));
    }
}
