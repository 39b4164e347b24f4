use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::compile::{compile_to_gateset, GateSet};
use crate::dense::{adiabatic_evolve, hamiltonian_matrix, to_state, to_vector};
use crate::error::Result;
use crate::estimate::{
    circuit_seeds, run_ensemble, CircuitInstance, Ensemble, EnsembleConfig, EstimatorResult,
    Measurement, ShotMode,
};
use crate::gates::apply_all;
use crate::noise::NoiseModel;
use crate::estimate::PostSelection;
use crate::rng::SeedStream;
use crate::sampling::{
    trotter_adiabatic, AdiabaticSchedule, CircuitRecord, Direction, TepaiSampler, TrotterConfig,
};

use super::problem::AdiabaticProblem;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityConfig {
    pub total_time: f64,
    pub delta: f64,
    pub n_circuits: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub gateset: GateSet,
}

/// Weighted ensemble estimate of `<gs| E[N U rho_HF U^dag] |gs>` along the
/// linear path `H_HF + (t/T) H_int`, read out exactly per circuit.
pub fn adiabatic_fidelity(problem: &AdiabaticProblem, cfg: &FidelityConfig) -> Result<EstimatorResult> {
    Ok(adiabatic_fidelity_ensemble(problem, cfg)?.real())
}

fn preparation(problem: &AdiabaticProblem, cfg: &FidelityConfig) -> Result<TepaiSampler> {
    let schedule = AdiabaticSchedule::linear(cfg.total_time)?;
    TepaiSampler::adiabatic(&problem.h_hf, &problem.h_int, &schedule, cfg.delta)
}

/// Same run with per-circuit outcomes kept.
pub fn adiabatic_fidelity_ensemble(problem: &AdiabaticProblem, cfg: &FidelityConfig) -> Result<Ensemble> {
    let sampler = preparation(problem, cfg)?;
    let target = Arc::new(problem.ground_state.clone());
    let factory = |_: usize, seeds: &SeedStream| -> Result<CircuitInstance> {
        let c = sampler.sample(&mut seeds.rng(&[0]));
        Ok(CircuitInstance {
            initial: problem.hf_state.clone(),
            ops: c.to_gateops(Direction::Forward, None)?,
            weight: c.weight(),
            measurement: Measurement::Overlap(Arc::clone(&target)),
        })
    };
    let ens_cfg = EnsembleConfig {
        n_circuits: cfg.n_circuits,
        shots: ShotMode::Exact,
        noise: NoiseModel::disabled(),
        post_selection: PostSelection::none(),
        master_seed: cfg.master_seed,
        gateset: cfg.gateset,
        count_gates: true,
        delta: Some(cfg.delta),
    };
    run_ensemble(&ens_cfg, &factory)
}

/// The first `count` preparation circuits of the run, as sampled.
pub fn fidelity_circuits(problem: &AdiabaticProblem, cfg: &FidelityConfig, count: usize) -> Result<Vec<CircuitRecord>> {
    let sampler = preparation(problem, cfg)?;
    Ok((0..count.min(cfg.n_circuits))
        .map(|i| sampler.sample(&mut circuit_seeds(cfg.master_seed, i).rng(&[0])).record())
        .collect())
}

/// Fidelity reached by exact (RK4-integrated) adiabatic evolution.
pub fn exact_adiabatic_fidelity(problem: &AdiabaticProblem, total_time: f64, steps: usize) -> Result<f64> {
    let h0 = hamiltonian_matrix(&problem.h_hf);
    let h1 = hamiltonian_matrix(&problem.h_int);
    let psi = adiabatic_evolve(&h0, &h1, |s| s, total_time, &to_vector(&problem.hf_state), steps.max(1));
    Ok(problem.ground_state.inner(&to_state(&psi.normalize())?)?.norm_sqr())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterPoint {
    pub steps: usize,
    pub value: f64,
    pub gates_2q: usize,
}

/// First-order Trotter fidelity along the same path.
pub fn trotter_fidelity(
    problem: &AdiabaticProblem,
    total_time: f64,
    steps: usize,
    gateset: GateSet,
) -> Result<TrotterPoint> {
    let schedule = AdiabaticSchedule::linear(total_time)?;
    let ops = trotter_adiabatic(&problem.h_hf, &problem.h_int, &schedule, TrotterConfig::new(steps)?);
    let mut psi = problem.hf_state.clone();
    apply_all(&mut psi, &ops)?;
    Ok(TrotterPoint {
        steps,
        value: problem.ground_state.inner(&psi)?.norm_sqr(),
        gates_2q: compile_to_gateset(&ops, problem.num_qubits(), gateset)?.two_qubit_count(),
    })
}
