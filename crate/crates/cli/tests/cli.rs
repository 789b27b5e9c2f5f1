use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

fn adsres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adsres")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

const ODD_FUNCTION: &str = r#"
[[test_function.components]]
n = 1
m = 1
profile = { kind = "bump", center = 2.1, width = 2.0, sharpness = 20.0 }
"#;

#[test]
fn resonances_lists_levels() {
    let o = adsres(&["resonances", "--lmax", "3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["schema_version"], 1);
    let list = v["resonances"].as_array().unwrap();
    let z: Vec<f64> = list.iter().map(|r| r["z"][0].as_f64().unwrap()).collect();
    assert_eq!(z, vec![1.0, 0.0, -3.0, -8.0]);
    let parity: Vec<u64> = list.iter().map(|r| r["parity"].as_u64().unwrap()).collect();
    assert_eq!(parity, vec![1, 0, 1, 0]);

    let one = stdout_json(&adsres(&["resonances", "--lmax", "0"]));
    assert_eq!(one["resonances"].as_array().unwrap().len(), 1);
}

#[test]
fn io_and_usage_errors_exit_with_two() {
    let o = adsres(&["resonances", "--lmax", "2", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/r.json"));
    assert_eq!(code(&adsres(&["rep", "--l", "2", "--format", "csv"])), 2);
    assert_eq!(code(&adsres(&["check", "bogus"])), 2);
    assert_eq!(code(&adsres(&["resonances", "--y", "1.0"])), 2);
    assert_eq!(code(&adsres(&["scan", "--grid", "0:1:2"])), 2);
    assert_eq!(code(&adsres(&["rep", "--l", "1", "--config", "/nonexistent-dir/c.toml"])), 2);
}

#[test]
fn rep_outputs() {
    let zero = stdout_json(&adsres(&["rep", "--l", "0", "--format", "json"]));
    assert_eq!(zero["schema_version"], 1);
    assert_eq!(zero["components"].as_array().unwrap().len(), 2);

    let two = stdout_json(&adsres(&["rep", "--l", "2"]));
    let finite = two["components"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["label"] == "FiniteDim")
        .unwrap();
    assert_eq!(finite["dimension"], 4);

    let text = String::from_utf8(adsres(&["rep", "--l", "9", "--format", "text"]).stdout).unwrap();
    assert!(text.contains("m = -10 | m = +10"));
    assert!(text.contains("n = +8, n = -8"));

    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("rep.svg");
    let o = adsres(&["rep", "--l", "3", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "run.toml", "seed = 7\n");
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("scan{i}.csv"));
            let o = adsres(&[
                "scan", "--grid", "0.1:0.3:2,0.4:0.6:2", "--config", &cfg, "--out", out.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
            fs::read(out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = adsres(&["check", "lattice", "--format", "json", "--config", &cfg]).stdout;
    let b = adsres(&["check", "lattice", "--format", "json", "--config", &cfg]).stdout;
    assert_eq!(a, b);
    assert_eq!(adsres(&["rep", "--l", "4"]).stdout, adsres(&["rep", "--l", "4"]).stdout);
}

#[test]
fn scan_edge_cases() {
    let o = adsres(&["scan", "--grid", "0:1:0,0:1:3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "re,im,abs,arg,flag,pole\n");

    let o = adsres(&["scan", "--grid", "-0.5:0.5:3,-1.5:0.5:3", "--y", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("contour"));

    let o = adsres(&["scan", "--grid", "0:0:1,0.5:0.5:1", "--lambda-max", "2"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

fn scan_magnitudes(grid: &str, extra: &[&str]) -> Vec<(f64, f64, Option<f64>)> {
    let mut args = vec!["scan", "--grid", grid, "--format", "json", "--y", "1.7"];
    args.extend_from_slice(extra);
    let o = adsres(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    stdout_json(&o)["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["re"].as_f64().unwrap(), r["im"].as_f64().unwrap(), r["abs"].as_f64()))
        .collect()
}

// |R| at distance 0.01 from a candidate pole over |R| at distance 0.2.
fn enhancement(rows: &[(f64, f64, Option<f64>)], im: f64) -> f64 {
    let at = |re: f64| rows.iter().find(|r| r.0 == re && r.1 == im).unwrap().2.unwrap();
    at(0.01) / at(0.2)
}

#[test]
fn scan_shows_only_parity_matching_poles() {
    // even f: pole at -i, none at 0
    let even = scan_magnitudes("0.01:0.2:2,-1:0:2", &[]);
    assert!(enhancement(&even, -1.0) > 10.0);
    assert!(enhancement(&even, 0.0) < 2.0);

    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "odd.toml", ODD_FUNCTION);
    let odd = scan_magnitudes("0.01:0.2:2,-1:0:2", &["--config", &cfg]);
    assert!(enhancement(&odd, 0.0) > 10.0);
    assert!(enhancement(&odd, -1.0) < 2.0);
}

#[test]
fn check_suites_and_exit_codes() {
    let o = adsres(&["check", "lattice"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS LAT-POISSON"));

    let o = adsres(&["check", "casimir", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let report = stdout_json(&o);
    let eigen = report["results"].as_array().unwrap().iter().find(|r| r["id"] == "CAS-EIGEN").unwrap();
    assert!(eigen["metric"].as_f64().unwrap() <= 1e-6);

    let o = adsres(&["check", "contour", "--y", "0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let dir = TempDir::new().unwrap();
    let strict = write_config(dir.path(), "strict.toml", "[checks]\ncasimir = 1e-16\n");
    let o = adsres(&["check", "casimir", "--config", &strict]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("CAS-EIGEN"));
}
