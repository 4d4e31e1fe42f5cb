//! End-to-end checks of the command-line surface: exit codes, file outputs,
//! and deterministic reports.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hdxlab"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hdxlab-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn gen_graph_writes_valid_json_and_reports_girth() {
    let dir = tmpdir("gen");
    let out = dir.join("g.json");
    let res = run(&["gen-graph", "--n", "20", "--t", "3", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{res:?}");
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("girth"));
    assert!(stderr.contains("two-sided gap"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["n"], 20);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 30);
}

#[test]
fn gen_graph_small_cases() {
    // n=5, t=2 only admits the 5-cycle.
    let res = run(&["gen-graph", "--n", "5", "--t", "2"]);
    assert!(res.status.success());
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("girth 5"), "{stderr}");

    // Odd stub count is an input error.
    let res = run(&["gen-graph", "--n", "5", "--t", "3"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn verify_canonical_passes_and_is_deterministic() {
    let dir = tmpdir("verify");
    let args = ["verify", "--out", dir.to_str().unwrap()];
    let res = run(&args);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    let first = fs::read(dir.join("report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["schema"], 1);
    assert!(doc["entries"].as_array().unwrap().len() >= 35);

    // Byte-identical on a second run.
    let res = run(&args);
    assert_eq!(res.status.code(), Some(0));
    let second = fs::read(dir.join("report.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn verify_exit_codes() {
    let dir = tmpdir("exit");
    // Unattainable tolerance turns numerical residuals into failures: exit 2.
    let res = run(&[
        "verify",
        "--tol-spec",
        "1e-18",
        "--tol-balance",
        "1e-18",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));

    // Invalid level: exit 3.
    let res = run(&["verify", "--k", "2", "--H", "2", "--out", dir.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn build_and_mix_and_report_round_trip() {
    let dir = tmpdir("pipeline");
    let res = run(&["build", "--out", dir.to_str().unwrap()]);
    assert!(res.status.success());
    for name in ["complex.json", "chain-downup.json", "chain-split.json"] {
        assert!(dir.join(name).exists(), "{name} missing");
    }
    let chain: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("chain-downup.json")).unwrap()).unwrap();
    assert_eq!(chain["pi"].as_array().unwrap().len(), 90);

    let res = run(&[
        "mix",
        "--out",
        dir.to_str().unwrap(),
        "--trials",
        "20",
        "--t-max",
        "50",
    ]);
    assert!(res.status.success());
    let csv = fs::read_to_string(dir.join("mix.csv")).unwrap();
    assert!(csv.starts_with("# eps"));
    assert!(csv.lines().any(|l| l == "t,tv_exact,tv_sampled"));
    // Curve crosses eps before the bound line says it must.
    let last = csv.lines().last().unwrap();
    let tv: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!(tv < 0.05, "final tv {tv}");

    // Re-render the stored report.
    let verify_dir = tmpdir("pipeline-verify");
    let res = run(&["verify", "--out", verify_dir.to_str().unwrap()]);
    assert!(res.status.success());
    let res = run(&["report", "--in", verify_dir.join("report.json").to_str().unwrap()]);
    assert!(res.status.success());
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("required bounds:"));
}

#[test]
fn spectrum_reads_graph_files() {
    let dir = tmpdir("spectrum");
    let out = dir.join("g.json");
    let res = run(&["gen-graph", "--n", "5", "--t", "2", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let res = run(&["spectrum", "--graph", out.to_str().unwrap()]);
    assert!(res.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    let evs = doc["eigenvalues"].as_array().unwrap();
    assert_eq!(evs.len(), 5);
    assert!((doc["two_sided_gap"].as_f64().unwrap() - 0.19098300562505255).abs() < 1e-9);
}
