mod common;

use std::fs;
use std::path::Path;

use liouville_conv::cli::run;
use liouville_conv::report::sha256_file;

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["lconv"];
    argv.extend_from_slice(args);
    let code = run(argv.iter().map(|a| a.replace("{dir}", dir.to_str().unwrap())).collect::<Vec<_>>());
    code
}

fn zeros_arg() -> String {
    common::data_file().to_str().unwrap().to_string()
}

#[test]
fn verify_l_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let z = zeros_arg();
    let code = run_in(
        dir.path(),
        &["verify", "L", "--limit", "10000", "--zeros", &z, "--count", "1000", "--samples", "log:50:10:10000", "--output", "{dir}/l.csv"],
    );
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("l.csv")).unwrap();
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 50);
    assert!(text.contains("# median_residual:"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("l.csv.manifest.json")).unwrap()).unwrap();
    let out = &manifest["outputs"][0];
    assert_eq!(out["sha256"].as_str().unwrap(), sha256_file(dir.path().join("l.csv")).unwrap());
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap(), sha256_file(common::data_file()).unwrap());
    assert_eq!(manifest["config"]["truncation"]["count"], 1000);
}

#[test]
fn identity_trials_pass() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["verify", "identity", "--d", "2", "--trials", "20", "--output", "{dir}/i.csv"]), 0);
    let text = fs::read_to_string(dir.path().join("i.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 21);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let z = zeros_arg();
    assert_eq!(run_in(dir.path(), &["verify", "dirichlet", "--output", "{dir}/d.csv"]), 2);
    assert_eq!(run_in(dir.path(), &["verify", "L", "--zeros", "{dir}/missing.txt"]), 2);
    assert_eq!(run_in(dir.path(), &["verify", "L", "--zeros", &z, "--T", "1e6", "--output", "{dir}/x.csv"]), 2);
    assert_eq!(run_in(dir.path(), &["verify", "exponential", "--zeros", &z, "--limit", "100", "--output", "{dir}/x.csv"]), 2);
    assert_eq!(run_in(dir.path(), &["bench", "--limit", "1000"]), 2);
    assert_eq!(run_in(dir.path(), &["sieve"]), 2);
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("# small run\nzeros = {}\ncount = 50\nsamples = log:5:10:1000\nformat = csv\n", zeros_arg())).unwrap();
    let code = run_in(dir.path(), &["verify", "M", "--config", "{dir}/run.cfg", "--count", "20", "--format", "json", "--output", "{dir}/m.json"]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 5);
    assert_eq!(report["rows"][0]["zeros_used"], 20);
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run_in(dir.path(), &["verify", "M", "--config", "{dir}/run.cfg"]), 2);
}

#[test]
fn table_commands_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["sieve", "--limit", "1000", "--kind", "mu", "--output", "{dir}/mu.bin"]), 0);
    let table = liouville_conv::sieve::SieveTable::load(dir.path().join("mu.bin")).unwrap();
    assert_eq!(table.prefix()[1000], 2);
    assert_eq!(run_in(dir.path(), &["convolve", "--limit", "30", "--d", "3", "--method", "naive", "--output", "{dir}/s3.csv"]), 0);
    let text = fs::read_to_string(dir.path().join("s3.csv")).unwrap();
    assert!(text.starts_with("n,value\n3,1\n4,-3\n"));
    let z = zeros_arg();
    assert_eq!(run_in(dir.path(), &["zeros-enrich", "--zeros", &z, "--count", "25", "--output", "{dir}/z.bin"]), 0);
    assert_eq!(run_in(dir.path(), &["verify", "L", "--zeros", "{dir}/z.bin", "--samples", "100,200", "--output", "{dir}/l.csv"]), 0);
    let cached = liouville_conv::zeros::ZeroSet::load(dir.path().join("z.bin")).unwrap();
    assert_eq!(cached.len(), 25);
}

#[test]
fn bench_small_grid_hashes_agree() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["bench", "--limit", "16384", "--d", "3", "--output", "{dir}/b.csv"]), 0);
    let text = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",true"));
}
