use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;
use tepai_core::estimate::{PostSelection, ShotMode};
use tepai_core::experiments::{
    adiabatic_fidelity_ensemble, energy_circuits, estimate_ground_energy, exact_adiabatic_fidelity,
    exact_energy_estimate, fidelity_circuits, otoc_circuits, otoc_series, trotter_energy,
    trotter_fidelity, AdiabaticProblem, EnergyEstimationConfig, FidelityConfig, OtocConfig,
};
use tepai_core::hamiltonian::serialize_hamiltonian;
use tepai_core::models::{generate_sparse_syk, SykParams, H3PLUS_HF_BITS, H3PLUS_TEXT};
use tepai_core::rng::derive_seed;
use tepai_core::sampling::{n_gates, n_sample};
use tepai_core::PauliHamiltonian;

use crate::config::{count_for, Experiment, RunConfig, MANIFEST_KIND};
use crate::output::{content_hash, write_json, write_results, DumpEntry, Ledger, Row};

pub enum Failure {
    /// Invalid config or inputs; exit status 2.
    Config(anyhow::Error),
    /// The run itself failed; exit status 1.
    Runtime(anyhow::Error),
}

#[derive(Clone, Debug, Serialize)]
struct HamiltonianInfo {
    source: String,
    sha256: String,
    num_qubits: usize,
    num_terms: usize,
    l1_norm: f64,
}

#[derive(Debug, Serialize)]
struct SeedEntry {
    series: String,
    x: f64,
    master_seed: u64,
}

#[derive(Debug, Serialize)]
struct Manifest {
    kind: &'static str,
    tool_version: &'static str,
    config: RunConfig,
    hamiltonian: Option<HamiltonianInfo>,
    seeds: Vec<SeedEntry>,
    reference: BTreeMap<String, f64>,
    artifacts: Vec<String>,
}

#[derive(Default)]
struct Report {
    rows: Vec<Row>,
    ledger: Ledger,
    dump: Vec<DumpEntry>,
    seeds: Vec<SeedEntry>,
    reference: BTreeMap<String, f64>,
}

enum Input {
    Problem(AdiabaticProblem),
    Model(PauliHamiltonian),
    Text(String),
}

fn info(source: String, text: &str, h: &PauliHamiltonian) -> HamiltonianInfo {
    HamiltonianInfo {
        source,
        sha256: content_hash(text),
        num_qubits: h.num_qubits(),
        num_terms: h.len(),
        l1_norm: h.l1_norm(),
    }
}

fn load_hamiltonian(path: &Option<PathBuf>) -> Result<(PauliHamiltonian, HamiltonianInfo)> {
    let (source, text) = match path {
        Some(p) => (
            p.display().to_string(),
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        ),
        None => ("bundled:h3plus".to_string(), H3PLUS_TEXT.to_string()),
    };
    let h = PauliHamiltonian::parse(&text).with_context(|| format!("parsing {source}"))?;
    let info = info(source, &text, &h);
    Ok((h, info))
}

fn syk_text(params: &SykParams, h: &PauliHamiltonian) -> String {
    format!(
        "# sparse SYK n_majorana={} k={} J={} seed={}\n# qubits={} terms={}\n{}",
        params.n_majorana,
        params.k,
        params.j,
        params.seed,
        h.num_qubits(),
        h.len(),
        serialize_hamiltonian(h)
    )
}

fn otoc_config(cfg: &RunConfig, h: &PauliHamiltonian) -> OtocConfig {
    let p = cfg.otoc.as_ref().expect("resolved");
    OtocConfig {
        i: p.i,
        j: p.j.unwrap_or(h.num_qubits()),
        coupling: p.coupling.unwrap_or(1.0),
        deltas: p.deltas.clone(),
        n_circuits: p.n_circuits.clone(),
        shots: if p.exact_expectation {
            ShotMode::Exact
        } else {
            ShotMode::Shots(p.shots)
        },
        noise: cfg.noise,
        odd_parity: p.odd_parity,
        master_seed: cfg.master_seed,
        gateset: cfg.gateset,
    }
}

/// Loads and checks everything the run needs; failures here are config
/// errors.
fn prepare(cfg: &RunConfig) -> Result<(Input, Option<HamiltonianInfo>)> {
    match cfg.experiment {
        Experiment::GsFidelity | Experiment::Energy => {
            let (h, info) = load_hamiltonian(&cfg.hamiltonian)?;
            let bits = match (&cfg.gs_fidelity, &cfg.energy) {
                (Some(p), _) => p.hf_bits,
                (_, Some(p)) => p.hf_bits,
                _ => None,
            };
            let bits = match (bits, &cfg.hamiltonian) {
                (Some(b), _) => b,
                (None, None) => H3PLUS_HF_BITS,
                (None, Some(_)) => anyhow::bail!("hf_bits is required with a custom Hamiltonian"),
            };
            anyhow::ensure!(
                h.num_qubits() < 64 && bits >> h.num_qubits() == 0,
                "hf_bits {bits:#b} does not fit {} qubits",
                h.num_qubits()
            );
            if let Some(p) = &cfg.energy {
                energy_config(cfg, p.deltas[0], count_for(&p.n_circuits, 0)).validate()?;
            }
            Ok((Input::Problem(AdiabaticProblem::new(h, bits)?), Some(info)))
        }
        Experiment::Otoc => {
            let p = cfg.otoc.as_ref().expect("resolved");
            let (h, info) = match &cfg.hamiltonian {
                Some(_) => load_hamiltonian(&cfg.hamiltonian)?,
                None => {
                    let h = generate_sparse_syk(&p.syk)?;
                    let text = syk_text(&p.syk, &h);
                    let info = info("generated:sparse-syk".into(), &text, &h);
                    (h, info)
                }
            };
            anyhow::ensure!(h.num_qubits() <= 14, "otoc supports at most 14 system qubits");
            otoc_config(cfg, &h).validate(2 * h.num_qubits())?;
            Ok((Input::Model(h), Some(info)))
        }
        Experiment::SykGen => {
            let p = cfg.syk_gen.as_ref().expect("resolved");
            let params = SykParams {
                n_majorana: p.n_majorana,
                k: p.k,
                j: p.j,
                seed: cfg.master_seed,
            };
            let h = generate_sparse_syk(&params)?;
            let text = syk_text(&params, &h);
            let out = p.out.as_ref().expect("resolved").display().to_string();
            let info = info(out, &text, &h);
            Ok((Input::Text(text), Some(info)))
        }
        Experiment::SampleStats => {
            let (h, info) = load_hamiltonian(&cfg.hamiltonian)?;
            Ok((Input::Model(h), Some(info)))
        }
    }
}

fn energy_config(cfg: &RunConfig, delta: f64, n_circuits: usize) -> EnergyEstimationConfig {
    let p = cfg.energy.as_ref().expect("resolved");
    EnergyEstimationConfig {
        total_time: p.total_time,
        s: p.s,
        epsilon: p.epsilon,
        delta,
        n_circuits,
        shots: if p.exact_expectation {
            ShotMode::Exact
        } else {
            ShotMode::Shots(p.shots)
        },
        noise: cfg.noise,
        post_selection: PostSelection::none(),
        master_seed: cfg.master_seed,
        gateset: cfg.gateset,
        bootstrap_resamples: p.bootstrap_resamples,
    }
}

fn run_gs_fidelity(cfg: &RunConfig, problem: &AdiabaticProblem) -> Result<Report> {
    let p = cfg.gs_fidelity.as_ref().expect("resolved");
    let mut report = Report::default();
    for (k, &delta) in p.deltas.iter().enumerate() {
        let fc = FidelityConfig {
            total_time: p.total_time,
            delta,
            n_circuits: count_for(&p.n_circuits, k),
            master_seed: derive_seed(cfg.master_seed, &[k as u64]),
            gateset: cfg.gateset,
        };
        let ens = adiabatic_fidelity_ensemble(problem, &fc)?;
        report.rows.push(Row::estimate("tepai", delta, &ens.real()));
        report.seeds.push(SeedEntry {
            series: "tepai".into(),
            x: delta,
            master_seed: fc.master_seed,
        });
        for (index, c) in fidelity_circuits(problem, &fc, cfg.dump_circuits)?.into_iter().enumerate() {
            report.dump.push(DumpEntry {
                series: "tepai".into(),
                x: delta,
                index,
                circuits: vec![c],
            });
        }
        report.ledger.push("tepai", delta, ens.outcomes);
    }
    for &r in &p.trotter_steps {
        let t = trotter_fidelity(problem, p.total_time, r, cfg.gateset)?;
        report.rows.push(Row::exact("trotter", r as f64, t.value, Some(t.gates_2q)));
    }
    let exact = exact_adiabatic_fidelity(problem, p.total_time, p.exact_steps)?;
    report.rows.push(Row::exact("exact", p.total_time, exact, None));
    report.reference.insert("exact_fidelity".into(), exact);
    report.reference.insert(
        "initial_fidelity".into(),
        problem.ground_state.amplitudes()[problem.hf_bits as usize].norm_sqr(),
    );
    report.reference.insert("e_exact".into(), problem.e_exact);
    report.reference.insert("e_hf".into(), problem.e_hf);
    Ok(report)
}

fn run_energy(cfg: &RunConfig, problem: &AdiabaticProblem) -> Result<Report> {
    let p = cfg.energy.as_ref().expect("resolved");
    let mut report = Report::default();
    for (k, &delta) in p.deltas.iter().enumerate() {
        let mut ec = energy_config(cfg, delta, count_for(&p.n_circuits, k));
        ec.master_seed = derive_seed(cfg.master_seed, &[k as u64]);
        if p.post_select_even {
            ec.post_selection = PostSelection::even(0..problem.num_qubits());
        }
        let est = estimate_ground_energy(problem, &ec)?;
        let (re, im) = (&est.real_part, &est.imag_part);
        let shots = re.n_shots_total + im.n_shots_total;
        report.rows.push(Row {
            series: "tepai".into(),
            x: delta,
            mean: est.e_est,
            stderr: est.stderr,
            n_circuits: est.outcomes.len(),
            accepted_fraction: if shots > 0 {
                (re.n_postselected + im.n_postselected) as f64 / shots as f64
            } else {
                re.accepted_fraction
            },
            gates_2q_mean: re.gates_2q_mean,
            gates_2q_std: re.gates_2q_std,
        });
        report.rows.push(Row::estimate("overlap-re", delta, re));
        report.rows.push(Row::estimate("overlap-im", delta, im));
        report.seeds.push(SeedEntry {
            series: "tepai".into(),
            x: delta,
            master_seed: ec.master_seed,
        });
        for (index, (a, b)) in energy_circuits(problem, &ec, cfg.dump_circuits)?.into_iter().enumerate() {
            report.dump.push(DumpEntry {
                series: "tepai".into(),
                x: delta,
                index,
                circuits: vec![a, b],
            });
        }
        report.ledger.push("tepai", delta, est.outcomes);
    }
    for &r in &p.trotter_steps {
        let t = trotter_energy(problem, p.total_time, p.s, p.epsilon, r, cfg.gateset)?;
        report.rows.push(Row::exact("trotter", r as f64, t.value, Some(t.gates_2q)));
    }
    let state_value = exact_energy_estimate(problem, p.total_time, p.s, p.epsilon, p.exact_steps)?;
    report.rows.push(Row::exact("exact-state", p.total_time, state_value, None));
    report.rows.push(Row::exact("ground", p.total_time, problem.e_exact, None));
    report.reference.insert("e_exact".into(), problem.e_exact);
    report.reference.insert("e_hf".into(), problem.e_hf);
    report.reference.insert("exact_state_estimate".into(), state_value);
    Ok(report)
}

fn run_otoc(cfg: &RunConfig, h: &PauliHamiltonian) -> Result<Report> {
    let p = cfg.otoc.as_ref().expect("resolved");
    let oc = otoc_config(cfg, h);
    let mut report = Report::default();
    report.seeds.push(SeedEntry {
        series: "otoc".into(),
        x: 0.0,
        master_seed: cfg.master_seed,
    });
    let points = otoc_series(h, &oc, &p.times)?;
    for point in points {
        let jt = point.jt;
        for (k, ((delta, r), outcomes)) in point.results.iter().zip(point.outcomes).enumerate() {
            let series = format!("tepai:{delta}");
            report.rows.push(Row::estimate(series.clone(), jt, r));
            for (index, (a, b)) in otoc_circuits(h, &oc, jt, k, cfg.dump_circuits)?.into_iter().enumerate() {
                report.dump.push(DumpEntry {
                    series: series.clone(),
                    x: jt,
                    index,
                    circuits: vec![a, b],
                });
            }
            report.ledger.push(series, jt, outcomes);
        }
        if let Some((value, err)) = point.zne {
            let rs = &point.results;
            report.rows.push(Row {
                series: "zne".into(),
                x: jt,
                mean: value,
                stderr: err,
                n_circuits: rs[0].1.n_circuits + rs[1].1.n_circuits,
                accepted_fraction: rs[..2].iter().map(|(_, r)| r.accepted_fraction).fold(f64::INFINITY, f64::min),
                gates_2q_mean: None,
                gates_2q_std: None,
            });
        }
        report.rows.push(Row::exact("exact", jt, point.exact, None));
    }
    Ok(report)
}

fn print_rows(rows: &[Row]) {
    println!("{:<14} {:>10} {:>14} {:>12} {:>9}", "series", "x", "mean", "stderr", "accepted");
    for r in rows {
        println!(
            "{:<14} {:>10.5} {:>14.8} {:>12.3e} {:>9.4}",
            r.series, r.x, r.mean, r.stderr, r.accepted_fraction
        );
    }
}

fn sample_stats(cfg: &RunConfig, h: &PauliHamiltonian) -> Result<()> {
    let p = cfg.sample_stats.as_ref().expect("resolved");
    let l1 = h.l1_norm();
    let delta_star = 1.0 / (p.t * l1);
    println!("{:<12} {}", "qubits", h.num_qubits());
    println!("{:<12} {}", "terms", h.len());
    println!("{:<12} {}", "l1_norm", l1);
    println!("{:<12} {}", "t", p.t);
    println!("{:<12} {}", "delta", p.delta);
    println!("{:<12} {}", "n_sample", n_sample(p.t, l1, p.delta)?);
    println!("{:<12} {}", "n_gates", n_gates(p.t, l1, p.delta)?);
    println!("{:<12} {}", "delta_star", delta_star);
    Ok(())
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new().num_threads(k).build()?.install(f)),
        None => Ok(f()),
    }
}

pub fn execute(cfg: RunConfig) -> std::result::Result<(), Failure> {
    let (input, hamiltonian) = prepare(&cfg).map_err(Failure::Config)?;
    run(cfg, input, hamiltonian).map_err(Failure::Runtime)
}

fn run(cfg: RunConfig, input: Input, hamiltonian: Option<HamiltonianInfo>) -> Result<()> {
    let report = match (&input, cfg.experiment) {
        (Input::Model(h), Experiment::SampleStats) => return sample_stats(&cfg, h),
        (Input::Text(text), Experiment::SykGen) => {
            let out = cfg.syk_gen.as_ref().and_then(|p| p.out.clone()).expect("resolved");
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(&out, text).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {}", out.display());
            return Ok(());
        }
        (Input::Problem(problem), Experiment::GsFidelity) => {
            in_pool(cfg.workers, || run_gs_fidelity(&cfg, problem))??
        }
        (Input::Problem(problem), Experiment::Energy) => in_pool(cfg.workers, || run_energy(&cfg, problem))??,
        (Input::Model(h), Experiment::Otoc) => in_pool(cfg.workers, || run_otoc(&cfg, h))??,
        _ => unreachable!("prepare matches the experiment"),
    };

    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut artifacts = vec!["results.csv".to_string()];
    write_results(&dir.join("results.csv"), &report.rows)?;
    if cfg.ledger {
        report.ledger.write(&dir.join("ledger.csv"))?;
        artifacts.push("ledger.csv".into());
    }
    if cfg.dump_circuits > 0 {
        write_json(&dir.join("circuit_dump.json"), &report.dump)?;
        artifacts.push("circuit_dump.json".into());
    }
    artifacts.push("manifest.json".into());
    print_rows(&report.rows);
    let manifest = Manifest {
        kind: MANIFEST_KIND,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        hamiltonian,
        seeds: report.seeds,
        reference: report.reference,
        artifacts,
    };
    write_json(&dir.join("manifest.json"), &manifest)
}
