use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use tepai_core::models::SykParams;
use tepai_core::sampling::validate_delta;
use tepai_core::{GateSet, NoiseModel};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_KIND: &str = "tepai-run-manifest";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    GsFidelity,
    Energy,
    Otoc,
    SykGen,
    SampleStats,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::GsFidelity => "gs-fidelity",
            Experiment::Energy => "energy",
            Experiment::Otoc => "otoc",
            Experiment::SykGen => "syk-gen",
            Experiment::SampleStats => "sample-stats",
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_noise() -> NoiseModel {
    NoiseModel::disabled()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    #[serde(default)]
    pub master_seed: u64,
    /// Rayon pool size; `None` leaves the choice to the environment.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Two-qubit cost model used for gate counts.
    #[serde(default)]
    pub gateset: GateSet,
    #[serde(default = "default_noise")]
    pub noise: NoiseModel,
    /// Hamiltonian text file; the bundled H3+ (or a generated SYK instance
    /// for `otoc`) when absent.
    #[serde(default)]
    pub hamiltonian: Option<PathBuf>,
    /// Write `ledger.csv` with one row per circuit.
    #[serde(default)]
    pub ledger: bool,
    /// Number of sampled circuits per series written to `circuit_dump.json`.
    #[serde(default)]
    pub dump_circuits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gs_fidelity: Option<GsFidelityParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub otoc: Option<OtocParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub syk_gen: Option<SykGenParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stats: Option<SampleStatsParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GsFidelityParams {
    pub total_time: f64,
    pub deltas: Vec<f64>,
    /// One count per angle, or a single count for all of them.
    pub n_circuits: Vec<usize>,
    pub trotter_steps: Vec<usize>,
    /// RK4 steps for the exact reference.
    pub exact_steps: usize,
    /// Reference basis state; defaults to the H3+ one.
    pub hf_bits: Option<u64>,
}

impl Default for GsFidelityParams {
    fn default() -> Self {
        GsFidelityParams {
            total_time: 8.0,
            deltas: [2, 4, 6, 8, 10, 12, 14].iter().map(|&d| 1.0 / d as f64).collect(),
            n_circuits: vec![500],
            trotter_steps: (1..=7).collect(),
            exact_steps: 4000,
            hf_bits: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergyParams {
    pub total_time: f64,
    pub s: f64,
    pub epsilon: f64,
    pub deltas: Vec<f64>,
    pub n_circuits: Vec<usize>,
    /// Shots per circuit, split between the X and Y ancilla bases.
    pub shots: usize,
    /// Read each circuit out exactly instead of sampling shots.
    pub exact_expectation: bool,
    /// Keep only shots with even parity on the system register.
    pub post_select_even: bool,
    pub bootstrap_resamples: usize,
    pub trotter_steps: Vec<usize>,
    pub exact_steps: usize,
    pub hf_bits: Option<u64>,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            total_time: 8.0,
            s: 10.0,
            epsilon: 0.05,
            deltas: vec![0.1],
            n_circuits: vec![500],
            shots: 1,
            exact_expectation: false,
            post_select_even: false,
            bootstrap_resamples: 200,
            trotter_steps: Vec::new(),
            exact_steps: 4000,
            hf_bits: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OtocParams {
    /// Instance generated when no Hamiltonian file is given.
    pub syk: SykParams,
    /// Energy scale J; circuit time is `Jt / J`. Defaults to `syk.j`.
    pub coupling: Option<f64>,
    pub i: usize,
    /// Defaults to the middle Majorana.
    pub j: Option<usize>,
    /// Values of `Jt`.
    pub times: Vec<f64>,
    pub deltas: Vec<f64>,
    pub n_circuits: Vec<usize>,
    pub shots: usize,
    pub exact_expectation: bool,
    pub odd_parity: bool,
}

impl Default for OtocParams {
    fn default() -> Self {
        OtocParams {
            syk: SykParams::new(18, 2.3, 0),
            coupling: None,
            i: 0,
            j: None,
            times: vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5],
            deltas: vec![0.05, 0.1],
            n_circuits: vec![500, 1000],
            shots: 5,
            exact_expectation: false,
            odd_parity: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SykGenParams {
    pub n_majorana: usize,
    pub k: f64,
    pub j: f64,
    /// Output file; `syk.ham` in the output directory by default.
    pub out: Option<PathBuf>,
}

impl Default for SykGenParams {
    fn default() -> Self {
        SykGenParams {
            n_majorana: 18,
            k: 2.3,
            j: 1.0,
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleStatsParams {
    pub t: f64,
    pub delta: f64,
}

impl Default for SampleStatsParams {
    fn default() -> Self {
        SampleStatsParams { t: 1.0, delta: 0.1 }
    }
}

impl RunConfig {
    pub fn new(experiment: Experiment) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            experiment,
            master_seed: 0,
            workers: None,
            output_dir: default_output_dir(),
            gateset: GateSet::default(),
            noise: NoiseModel::disabled(),
            hamiltonian: None,
            ledger: false,
            dump_circuits: 0,
            gs_fidelity: None,
            energy: None,
            otoc: None,
            syk_gen: None,
            sample_stats: None,
        }
    }

    /// Reads a config file, or the config echoed inside a run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let value = match value.get("kind").and_then(|k| k.as_str()) {
            Some(MANIFEST_KIND) => value
                .get("config")
                .cloned()
                .context("manifest has no `config` block")?,
            _ => value,
        };
        let cfg: RunConfig = serde_json::from_value(value)
            .with_context(|| format!("invalid config in {}", path.display()))?;
        ensure!(
            cfg.schema_version == SCHEMA_VERSION,
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            cfg.schema_version
        );
        Ok(cfg)
    }

    /// Fills the active section with defaults and checks that no other
    /// section is present.
    pub fn resolve(mut self) -> Result<Self> {
        let e = self.experiment;
        let present = [
            (Experiment::GsFidelity, self.gs_fidelity.is_some()),
            (Experiment::Energy, self.energy.is_some()),
            (Experiment::Otoc, self.otoc.is_some()),
            (Experiment::SykGen, self.syk_gen.is_some()),
            (Experiment::SampleStats, self.sample_stats.is_some()),
        ];
        for (other, given) in present {
            if given && other != e {
                bail!(
                    "section `{}` does not apply to experiment `{}`",
                    other.name().replace('-', "_"),
                    e.name()
                );
            }
        }
        match e {
            Experiment::GsFidelity => {
                self.gs_fidelity.get_or_insert_with(Default::default);
            }
            Experiment::Energy => {
                self.energy.get_or_insert_with(Default::default);
            }
            Experiment::Otoc => {
                let p = self.otoc.get_or_insert_with(Default::default);
                if self.hamiltonian.is_none() {
                    p.coupling.get_or_insert(p.syk.j);
                    p.j.get_or_insert(p.syk.n_majorana / 2);
                }
            }
            Experiment::SykGen => {
                let p = self.syk_gen.get_or_insert_with(Default::default);
                p.out.get_or_insert_with(|| self.output_dir.join("syk.ham"));
            }
            Experiment::SampleStats => {
                self.sample_stats.get_or_insert_with(Default::default);
            }
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if let Some(w) = self.workers {
            ensure!(w > 0, "workers must be positive");
        }
        self.noise.validate()?;
        if let Some(p) = &self.gs_fidelity {
            ensure!(p.total_time >= 0.0 && p.total_time.is_finite(), "total_time must be non-negative");
            check_deltas(&p.deltas)?;
            check_counts(&p.n_circuits, p.deltas.len())?;
            ensure!(p.trotter_steps.iter().all(|&r| r > 0), "trotter_steps must be positive");
            ensure!(p.exact_steps > 0, "exact_steps must be positive");
        }
        if let Some(p) = &self.energy {
            ensure!(p.total_time >= 0.0 && p.total_time.is_finite(), "total_time must be non-negative");
            ensure!(p.s.is_finite() && p.s > 0.0, "s must be positive");
            let se = p.s * p.epsilon;
            ensure!(se > 0.0 && se < std::f64::consts::FRAC_PI_2, "s * epsilon = {se} must lie in (0, pi/2)");
            check_deltas(&p.deltas)?;
            check_counts(&p.n_circuits, p.deltas.len())?;
            ensure!(p.exact_expectation || p.shots > 0, "shots must be positive");
            ensure!(p.bootstrap_resamples > 1, "bootstrap_resamples must exceed 1");
            ensure!(p.trotter_steps.iter().all(|&r| r > 0), "trotter_steps must be positive");
            ensure!(p.exact_steps > 0, "exact_steps must be positive");
        }
        if let Some(p) = &self.otoc {
            ensure!(!p.times.is_empty(), "at least one time is required");
            ensure!(p.times.iter().all(|t| t.is_finite()), "times must be finite");
            check_deltas(&p.deltas)?;
            ensure!(
                p.n_circuits.len() == p.deltas.len(),
                "otoc needs one circuit count per angle"
            );
            ensure!(p.n_circuits.iter().all(|&n| n > 0), "n_circuits must be positive");
            ensure!(p.exact_expectation || p.shots > 0, "shots must be positive");
        }
        if let Some(p) = &self.sample_stats {
            ensure!(p.t >= 0.0 && p.t.is_finite(), "t must be non-negative");
            validate_delta(p.delta)?;
        }
        Ok(())
    }
}

fn check_deltas(deltas: &[f64]) -> Result<()> {
    ensure!(!deltas.is_empty(), "at least one delta is required");
    for &d in deltas {
        validate_delta(d)?;
    }
    Ok(())
}

fn check_counts(counts: &[usize], n_deltas: usize) -> Result<()> {
    ensure!(
        counts.len() == 1 || counts.len() == n_deltas,
        "n_circuits must have one entry or one per delta"
    );
    ensure!(counts.iter().all(|&n| n > 0), "n_circuits must be positive");
    Ok(())
}

/// Circuit count for angle number `k`.
pub fn count_for(counts: &[usize], k: usize) -> usize {
    if counts.len() == 1 {
        counts[0]
    } else {
        counts[k]
    }
}
