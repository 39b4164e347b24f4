use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use tepai_core::{GateSet, NoiseModel};

use crate::config::{Experiment, RunConfig};

const OUTPUT_HELP: &str = "\
Outputs (in the output directory):
  results.csv         series,x,mean,stderr,n_circuits,accepted_fraction,gates_2q_mean,gates_2q_std
                      x is the interpolation angle for sampled series, the step count for
                      trotter series, and Jt for otoc series. Gate columns are empty when
                      not applicable.
  manifest.json       resolved config, seeds, Hamiltonian hash and reference values.
                      Passing it back through --config reproduces the run.
  ledger.csv          with --ledger: series,x,index,seed,weight,raw_re,raw_im,shots,
                      accepted_shots,acceptance,invalid,gates_2q
  circuit_dump.json   with --dump-circuits N: the first N sampled circuits per series.

Exit status: 0 on success, 2 for an invalid config, 1 for a failed run.
The worker count comes from --workers, the config, or TEPAI_WORKERS; results do not depend on it.";

#[derive(Parser, Debug)]
#[command(name = "tepai", version, about = "Stochastic Hamiltonian simulation experiments", after_help = OUTPUT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adiabatic ground-state fidelity of H3+ against angle and Trotter steps.
    GsFidelity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: GsFidelityArgs,
    },
    /// Ground-energy estimate from Hadamard tests on the prepared state.
    Energy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: EnergyArgs,
    },
    /// Out-of-time-order correlator of a sparse SYK instance.
    Otoc {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: OtocArgs,
    },
    /// Writes a sparse SYK instance in the Hamiltonian text format.
    SykGen {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: SykGenArgs,
    },
    /// Prints sampling overhead and expected gate count.
    SampleStats {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: SampleStatsArgs,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config or manifest; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Two-qubit cost model: cx or rzz.
    #[arg(long, value_parser = parse_gateset)]
    gateset: Option<GateSet>,
    /// Hamiltonian text file.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    /// Depolarizing probability after single-qubit gates.
    #[arg(long)]
    noise_1q: Option<f64>,
    /// Depolarizing probability after two-qubit gates.
    #[arg(long)]
    noise_2q: Option<f64>,
    /// Write per-circuit ledger.csv.
    #[arg(long)]
    ledger: bool,
    /// Dump the first N sampled circuits per series.
    #[arg(long, value_name = "N")]
    dump_circuits: Option<usize>,
}

#[derive(Args, Debug)]
struct GsFidelityArgs {
    #[arg(long = "T")]
    total_time: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n_circuits: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    trotter_steps: Option<Vec<usize>>,
    #[arg(long)]
    exact_steps: Option<usize>,
    #[arg(long)]
    hf_bits: Option<u64>,
}

#[derive(Args, Debug)]
struct EnergyArgs {
    #[arg(long = "T")]
    total_time: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n_circuits: Option<Vec<usize>>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    exact_expectation: bool,
    #[arg(long)]
    post_select_even: bool,
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    trotter_steps: Option<Vec<usize>>,
    #[arg(long)]
    exact_steps: Option<usize>,
    #[arg(long)]
    hf_bits: Option<u64>,
}

#[derive(Args, Debug)]
struct OtocArgs {
    /// Values of Jt.
    #[arg(long = "t", value_delimiter = ',', allow_negative_numbers = true)]
    times: Option<Vec<f64>>,
    #[arg(long)]
    n_majorana: Option<usize>,
    #[arg(long)]
    k: Option<f64>,
    /// Energy scale J.
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long)]
    syk_seed: Option<u64>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n_circuits: Option<Vec<usize>>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    exact_expectation: bool,
    /// Keep all shots instead of post-selecting odd parity.
    #[arg(long)]
    no_post_select: bool,
}

#[derive(Args, Debug)]
struct SykGenArgs {
    #[arg(long)]
    n_majorana: Option<usize>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long = "J")]
    j: Option<f64>,
    /// Output file.
    #[arg(long = "file")]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleStatsArgs {
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
}

fn parse_gateset(s: &str) -> Result<GateSet, String> {
    match s {
        "cx" => Ok(GateSet::Cx),
        "rzz" => Ok(GateSet::Rzz),
        _ => Err(format!("unknown gateset `{s}` (expected cx or rzz)")),
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Common {
    fn base(&self, experiment: Experiment) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::new(experiment),
        };
        if cfg.experiment != experiment {
            bail!(
                "config is for `{}`, not `{}`",
                cfg.experiment.name(),
                experiment.name()
            );
        }
        set(&mut cfg.master_seed, self.seed);
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        set(&mut cfg.output_dir, self.out.clone());
        set(&mut cfg.gateset, self.gateset);
        if self.hamiltonian.is_some() {
            cfg.hamiltonian = self.hamiltonian.clone();
        }
        if self.noise_1q.is_some() || self.noise_2q.is_some() {
            let (l1, l2) = if cfg.noise.enabled {
                (cfg.noise.lambda_1q, cfg.noise.lambda_2q)
            } else {
                (0.0, 0.0)
            };
            cfg.noise = NoiseModel {
                lambda_1q: self.noise_1q.unwrap_or(l1),
                lambda_2q: self.noise_2q.unwrap_or(l2),
                enabled: true,
            };
        }
        cfg.ledger |= self.ledger;
        set(&mut cfg.dump_circuits, self.dump_circuits);
        if cfg.workers.is_none() {
            if let Ok(v) = std::env::var("TEPAI_WORKERS") {
                cfg.workers = Some(v.trim().parse().map_err(|_| {
                    anyhow::anyhow!("TEPAI_WORKERS must be a positive integer, got `{v}`")
                })?);
            }
        }
        Ok(cfg)
    }
}

impl Cli {
    /// Config file values first, then flags on top, then defaults for
    /// whatever is still unset.
    pub fn into_config(self) -> Result<RunConfig> {
        let cfg = match self.command {
            Command::GsFidelity { common, args } => {
                let mut cfg = common.base(Experiment::GsFidelity)?;
                let p = cfg.gs_fidelity.get_or_insert_with(Default::default);
                set(&mut p.total_time, args.total_time);
                set(&mut p.deltas, args.delta);
                set(&mut p.n_circuits, args.n_circuits);
                set(&mut p.trotter_steps, args.trotter_steps);
                set(&mut p.exact_steps, args.exact_steps);
                if args.hf_bits.is_some() {
                    p.hf_bits = args.hf_bits;
                }
                cfg
            }
            Command::Energy { common, args } => {
                let mut cfg = common.base(Experiment::Energy)?;
                let p = cfg.energy.get_or_insert_with(Default::default);
                set(&mut p.total_time, args.total_time);
                set(&mut p.s, args.s);
                set(&mut p.epsilon, args.epsilon);
                set(&mut p.deltas, args.delta);
                set(&mut p.n_circuits, args.n_circuits);
                set(&mut p.shots, args.shots);
                p.exact_expectation |= args.exact_expectation;
                p.post_select_even |= args.post_select_even;
                set(&mut p.bootstrap_resamples, args.bootstrap);
                set(&mut p.trotter_steps, args.trotter_steps);
                set(&mut p.exact_steps, args.exact_steps);
                if args.hf_bits.is_some() {
                    p.hf_bits = args.hf_bits;
                }
                cfg
            }
            Command::Otoc { common, args } => {
                let mut cfg = common.base(Experiment::Otoc)?;
                let p = cfg.otoc.get_or_insert_with(Default::default);
                set(&mut p.times, args.times);
                set(&mut p.syk.n_majorana, args.n_majorana);
                set(&mut p.syk.k, args.k);
                set(&mut p.syk.seed, args.syk_seed);
                if let Some(c) = args.coupling {
                    p.syk.j = c;
                    p.coupling = Some(c);
                }
                set(&mut p.i, args.i);
                if args.j.is_some() {
                    p.j = args.j;
                }
                set(&mut p.deltas, args.delta);
                set(&mut p.n_circuits, args.n_circuits);
                set(&mut p.shots, args.shots);
                p.exact_expectation |= args.exact_expectation;
                if args.no_post_select {
                    p.odd_parity = false;
                }
                cfg
            }
            Command::SykGen { common, args } => {
                let mut cfg = common.base(Experiment::SykGen)?;
                let p = cfg.syk_gen.get_or_insert_with(Default::default);
                set(&mut p.n_majorana, args.n_majorana);
                set(&mut p.k, args.k);
                set(&mut p.j, args.j);
                if args.file.is_some() {
                    p.out = args.file;
                }
                cfg
            }
            Command::SampleStats { common, args } => {
                let mut cfg = common.base(Experiment::SampleStats)?;
                let p = cfg.sample_stats.get_or_insert_with(Default::default);
                set(&mut p.t, args.t);
                set(&mut p.delta, args.delta);
                cfg
            }
        };
        cfg.resolve()
    }
}
