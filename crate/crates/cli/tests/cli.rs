use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn asgf(args: &[&str], workers_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_asgf"));
    cmd.args(args).env_remove("ASGF_WORKERS");
    if let Some(w) = workers_env {
        cmd.env("ASGF_WORKERS", w);
    }
    cmd.output().unwrap()
}

fn ok(output: &Output) -> String {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn lists_benchmarks() {
    let text = ok(&asgf(&["list-benchmarks", "--dimension", "4"], None));
    for id in ["branin-2", "ackley-4", "rastrigin-4", "cross-in-tray-2"] {
        assert!(text.contains(id), "{text}");
    }
}

#[test]
fn run_uses_file_flags_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    fs::write(
        &config,
        "[experiment]\nbenchmark = \"sphere-3\"\ntrials = 5\n\n[asgf]\nsigma0 = 2.0\neps_m = 0.05\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let args = [
        "run",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "3",
        "--set",
        "sigma0=1.5",
        "--out",
        out.to_str().unwrap(),
    ];
    let text = ok(&asgf(&args, Some("2")));
    assert!(text.contains("3/3 succeeded"), "{text}");
    let json = summary(&out);
    assert_eq!(json["trial_count"], 3);
    assert_eq!(json["config"]["sigma0"], 1.5);
    assert_eq!(json["config"]["eps_m"], 0.05);
    assert_eq!(json["worker_count"], 2);
    assert_eq!(json["workers_env"], "2");
    assert!(out.join("trials/trial_0002.csv").exists());
}

#[test]
fn compare_merges_external_rows() {
    let dir = tempfile::tempdir().unwrap();
    let external = dir.path().join("cma.csv");
    fs::write(
        &external,
        "benchmark,algorithm,trial_count,success_rate,mean_iterations,mean_evaluations\nsphere-2,cma,100,0.99,40,400\n",
    )
    .unwrap();
    let out = dir.path().join("cmp");
    let text = ok(&asgf(
        &[
            "compare",
            "--benchmark",
            "sphere-2",
            "--algos",
            "asgf,dgs",
            "--trials",
            "2",
            "--workers",
            "1",
            "--external",
            external.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    ));
    assert_eq!(text.lines().count(), 4, "{text}");
    let csv = fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert!(csv.ends_with("sphere-2,cma,100,0.99,40,400\n"));
    assert!(out.join("asgf/summary.json").exists() && out.join("dgs/summary.json").exists());
}

#[test]
fn trace_writes_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace");
    ok(&asgf(
        &["trace", "--benchmark", "branin", "--seed", "4", "--parallel-directions", "--out", out.to_str().unwrap()],
        None,
    ));
    for file in ["convergence.csv", "convergence.svg", "summary.json", "trials/trial_0000.csv"] {
        assert!(out.join(file).exists(), "{file}");
    }
    assert_eq!(summary(&out)["config"]["parallel"], true);
}

#[test]
fn bad_input_fails_cleanly() {
    let out = asgf(&["run", "--benchmark", "nope-3", "--out", "/nonexistent"], None);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = asgf(&["run", "--benchmark", "sphere-2", "--set", "sigma_zero=1"], None);
    assert!(!out.status.success());
}
