use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tepai(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tepai"))
        .current_dir(dir)
        .env_remove("TEPAI_WORKERS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tepai(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

const ENERGY: &[&str] = &[
    "energy", "--T", "8", "--s", "10", "--delta", "0.1", "--n-circuits", "10",
    "--exact-expectation", "--seed", "7", "--ledger",
];

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn energy_outputs_do_not_depend_on_workers() {
    let tmp = TempDir::new().unwrap();
    let a = with(ENERGY, &["--out", "a", "--workers", "1"]);
    let b = with(ENERGY, &["--out", "b", "--workers", "3"]);
    ok(tmp.path(), &strs(&a));
    ok(tmp.path(), &strs(&b));
    let c = Command::new(env!("CARGO_BIN_EXE_tepai"))
        .current_dir(tmp.path())
        .env("TEPAI_WORKERS", "2")
        .args(with(ENERGY, &["--out", "c"]))
        .output()
        .unwrap();
    assert!(c.status.success());
    for file in ["results.csv", "ledger.csv"] {
        let first = read(tmp.path().join("a").join(file));
        assert_eq!(first, read(tmp.path().join("b").join(file)));
        assert_eq!(first, read(tmp.path().join("c").join(file)));
    }
    let manifest = read(tmp.path().join("c/manifest.json"));
    assert!(manifest.contains("\"workers\": 2"));
}

#[test]
fn results_header_is_stable() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), ENERGY);
    let csv = read(tmp.path().join("out/results.csv"));
    assert_eq!(
        csv.lines().next().unwrap(),
        "series,x,mean,stderr,n_circuits,accepted_fraction,gates_2q_mean,gates_2q_std"
    );
    let ledger = read(tmp.path().join("out/ledger.csv"));
    assert_eq!(ledger.lines().count(), 11);
}

#[test]
fn manifest_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &strs(&with(ENERGY, &["--dump-circuits", "2"])));
    let dir = tmp.path().join("out");
    let (results, manifest, dump) = (
        read(dir.join("results.csv")),
        read(dir.join("manifest.json")),
        read(dir.join("circuit_dump.json")),
    );
    fs::copy(dir.join("manifest.json"), tmp.path().join("saved.json")).unwrap();
    fs::remove_dir_all(&dir).unwrap();
    ok(tmp.path(), &["energy", "--config", "saved.json"]);
    assert_eq!(read(dir.join("results.csv")), results);
    assert_eq!(read(dir.join("manifest.json")), manifest);
    assert_eq!(read(dir.join("circuit_dump.json")), dump);
}

#[test]
fn flags_override_config_values() {
    let tmp = TempDir::new().unwrap();
    fs::write(
        tmp.path().join("cfg.json"),
        r#"{"schema_version": 1, "experiment": "sample-stats", "master_seed": 1,
            "sample_stats": {"t": 2.0, "delta": 0.5}}"#,
    )
    .unwrap();
    let out = ok(tmp.path(), &["sample-stats", "--config", "cfg.json", "--t", "1"]);
    assert!(out.contains("t            1\n"));
    assert!(out.contains("delta        0.5\n"));
}

fn field(stdout: &str, name: &str) -> f64 {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(name).map(|v| v.trim().parse().unwrap()))
        .unwrap_or_else(|| panic!("no {name} in {stdout}"))
}

#[test]
fn sample_stats_values() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("toy.ham"), "1.0 XZ\n").unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2.to_string();
    let out = ok(tmp.path(), &["sample-stats", "--hamiltonian", "toy.ham", "--t", "1", "--delta", &half_pi]);
    assert!((field(&out, "n_sample") - std::f64::consts::E.powi(2)).abs() < 1e-12);
    assert!((field(&out, "n_gates") - 3.0).abs() < 1e-12);
    assert_eq!(field(&out, "delta_star"), 1.0);

    let out = ok(tmp.path(), &["sample-stats", "--hamiltonian", "toy.ham", "--t", "0", "--delta", "0.3"]);
    assert_eq!(field(&out, "n_sample"), 1.0);
    assert_eq!(field(&out, "n_gates"), 0.0);

    let out = ok(tmp.path(), &["sample-stats"]);
    let l1 = tepai_core::models::build_h3plus().l1_norm();
    assert_eq!(field(&out, "l1_norm"), l1);
}

#[test]
fn otoc_at_zero_time() {
    let tmp = TempDir::new().unwrap();
    ok(
        tmp.path(),
        &["otoc", "--t", "0", "--n-majorana", "10", "--delta", "0.1,0.2", "--n-circuits", "20,20", "--seed", "3"],
    );
    let csv = read(tmp.path().join("out/results.csv"));
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r[1], "0.0");
        assert!((r[2].parse::<f64>().unwrap() + 1.0).abs() < 1e-12, "{r:?}");
        assert_eq!(r[5].parse::<f64>().unwrap(), 1.0);
    }
    assert!(rows.iter().any(|r| r[0] == "zne"));
}

#[test]
fn syk_gen_is_byte_identical_and_parity_even() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["syk-gen", "--seed", "4", "--file", "a.ham"]);
    ok(tmp.path(), &["syk-gen", "--seed", "4", "--file", "b.ham"]);
    ok(tmp.path(), &["syk-gen", "--seed", "5", "--file", "c.ham"]);
    let a = read(tmp.path().join("a.ham"));
    assert_eq!(a, read(tmp.path().join("b.ham")));
    assert_ne!(a, read(tmp.path().join("c.ham")));
    assert!(a.starts_with("# sparse SYK n_majorana=18 k=2.3 J=1 seed=4\n"));
    let h = tepai_core::PauliHamiltonian::parse(&a).unwrap();
    assert_eq!(h.num_qubits(), 9);
    for line in a.lines().filter(|l| !l.starts_with('#')) {
        let axes = line.split_whitespace().nth(1).unwrap();
        assert_eq!(axes.chars().filter(|c| matches!(c, 'X' | 'Y')).count() % 2, 0, "{line}");
    }
}

#[test]
fn gs_fidelity_at_zero_time_is_initial_overlap() {
    let tmp = TempDir::new().unwrap();
    ok(
        tmp.path(),
        &["gs-fidelity", "--T", "0", "--delta", "0.5", "--n-circuits", "4", "--trotter-steps", "1,2", "--gateset", "rzz"],
    );
    let csv = read(tmp.path().join("out/results.csv"));
    let mean = |series: &str| -> Vec<f64> {
        csv.lines()
            .filter(|l| l.starts_with(&format!("{series},")))
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect()
    };
    for v in mean("tepai").into_iter().chain(mean("trotter")).chain(mean("exact")) {
        assert!((v - 0.944_052_57).abs() < 1e-8, "{v}");
    }
    assert!(read(tmp.path().join("out/manifest.json")).contains("\"gateset\": \"rzz\""));
}

#[test]
fn exit_status_distinguishes_config_and_runtime_errors() {
    let tmp = TempDir::new().unwrap();
    let p = tmp.path();
    fs::write(p.join("unknown.json"), r#"{"schema_version": 1, "experiment": "energy", "extra": 0}"#).unwrap();
    fs::write(p.join("version.json"), r#"{"schema_version": 9, "experiment": "energy"}"#).unwrap();
    fs::write(p.join("section.json"), r#"{"schema_version": 1, "experiment": "energy", "otoc": {}}"#).unwrap();
    fs::write(p.join("file"), "").unwrap();
    let code = |args: &[&str]| tepai(p, args).status.code();
    assert_eq!(code(&["energy", "--config", "unknown.json"]), Some(2));
    assert_eq!(code(&["energy", "--config", "version.json"]), Some(2));
    assert_eq!(code(&["energy", "--config", "section.json"]), Some(2));
    assert_eq!(code(&["otoc", "--config", "unknown.json"]), Some(2));
    assert_eq!(code(&["energy", "--delta", "4"]), Some(2));
    assert_eq!(code(&["sample-stats", "--hamiltonian", "missing.ham"]), Some(2));
    assert_eq!(code(&["otoc", "--n-majorana", "10", "--i", "3", "--j", "3"]), Some(2));
    assert_eq!(code(&["energy", "--bogus-flag"]), Some(2));
    assert_eq!(
        code(&["energy", "--n-circuits", "2", "--exact-expectation", "--bootstrap", "5", "--out", "file"]),
        Some(1)
    );
}
