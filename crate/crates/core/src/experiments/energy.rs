use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compile::{compile_to_gateset, GateSet};
use crate::dense::{adiabatic_evolve, expm_hermitian, hamiltonian_matrix, to_vector};
use crate::error::{Error, Result};
use crate::estimate::{
    bootstrap_stderr, circuit_seeds, hadamard_test_instance, run_ensemble, CircuitInstance,
    CircuitOutcome, EnsembleConfig, EstimatorResult, PostSelection, ShotMode,
};
use crate::gates::apply_all;
use crate::noise::NoiseModel;
use crate::rng::{derive_seed, SeedStream};
use crate::sampling::{
    trotter_adiabatic, trotter_circuit, AdiabaticSchedule, CircuitRecord, TepaiSampler,
    TetrisSampler, TrotterConfig,
};
use crate::statevector::StateVector;

use super::fidelity::TrotterPoint;
use super::problem::AdiabaticProblem;

fn default_epsilon() -> f64 {
    0.05
}

fn default_bootstrap() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimationConfig {
    /// Adiabatic preparation time.
    pub total_time: f64,
    /// Hadamard-test evolution parameter.
    pub s: f64,
    /// Energy shift probe around `E_HF`.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Shared by the preparation and the controlled evolution.
    pub delta: f64,
    pub n_circuits: usize,
    pub shots: ShotMode,
    pub noise: NoiseModel,
    #[serde(default)]
    pub post_selection: PostSelection,
    pub master_seed: u64,
    #[serde(default)]
    pub gateset: GateSet,
    #[serde(default = "default_bootstrap")]
    pub bootstrap_resamples: usize,
}

impl EnergyEstimationConfig {
    pub fn validate(&self) -> Result<()> {
        let se = self.s * self.epsilon;
        if !(se > 0.0 && se < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "s * epsilon = {se} must lie in (0, pi/2)"
            )));
        }
        self.noise.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub e_est: f64,
    pub stderr: f64,
    pub e_hf: f64,
    pub overlap_re: f64,
    pub overlap_im: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
    pub real_part: EstimatorResult,
    pub imag_part: EstimatorResult,
    #[serde(skip)]
    pub outcomes: Vec<CircuitOutcome>,
}

/// `eta^± = Im[e^{-i s (E_HF ± eps)} z]`.
pub fn etas(z: Complex64, e_hf: f64, epsilon: f64, s: f64) -> (f64, f64) {
    let eta = |e: f64| (Complex64::from_polar(1.0, -s * e) * z).im;
    (eta(e_hf + epsilon), eta(e_hf - epsilon))
}

/// Inverts `eta^±` for the energy:
/// `E_HF + atan(tan(s eps) (eta+ + eta-) / (eta- - eta+)) / s`.
pub fn energy_from_overlaps(eta_plus: f64, eta_minus: f64, e_hf: f64, epsilon: f64, s: f64) -> Result<f64> {
    let den = eta_minus - eta_plus;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular(
            "eta+ equals eta-; more samples are needed".into(),
        ));
    }
    Ok(e_hf + ((s * epsilon).tan() * (eta_plus + eta_minus) / den).atan() / s)
}

pub fn energy_from_overlap(z: Complex64, e_hf: f64, epsilon: f64, s: f64) -> Result<f64> {
    let (p, m) = etas(z, e_hf, epsilon, s);
    energy_from_overlaps(p, m, e_hf, epsilon, s)
}

/// Ground-energy estimate from Hadamard tests of TETRIS `exp(+isH)` on
/// adiabatically prepared TE-PAI states.
pub fn estimate_ground_energy(
    problem: &AdiabaticProblem,
    cfg: &EnergyEstimationConfig,
) -> Result<EnergyEstimate> {
    cfg.validate()?;
    let (prep, tetris) = samplers(problem, cfg)?;
    let factory = |_: usize, seeds: &SeedStream| -> Result<CircuitInstance> {
        let u = prep.sample(&mut seeds.rng(&[0]));
        let v = tetris.sample(&mut seeds.rng(&[1]));
        hadamard_test_instance(&problem.hf_state, Some(&u), &v)
    };
    let ens_cfg = EnsembleConfig {
        n_circuits: cfg.n_circuits,
        shots: cfg.shots,
        noise: cfg.noise,
        post_selection: cfg.post_selection.clone(),
        master_seed: cfg.master_seed,
        gateset: cfg.gateset,
        count_gates: true,
        delta: Some(cfg.delta),
    };
    let ens = run_ensemble(&ens_cfg, &factory)?;
    let z = ens.complex_mean();
    let (eta_plus, eta_minus) = etas(z, problem.e_hf, cfg.epsilon, cfg.s);
    let e_est = energy_from_overlaps(eta_plus, eta_minus, problem.e_hf, cfg.epsilon, cfg.s)?;
    let stderr = bootstrap_stderr(
        ens.outcomes.len(),
        cfg.bootstrap_resamples,
        derive_seed(cfg.master_seed, &[0xb007]),
        |idx| energy_from_overlap(ens.complex_mean_of(idx), problem.e_hf, cfg.epsilon, cfg.s),
    );
    Ok(EnergyEstimate {
        e_est,
        stderr,
        e_hf: problem.e_hf,
        overlap_re: z.re,
        overlap_im: z.im,
        eta_plus,
        eta_minus,
        real_part: ens.real(),
        imag_part: ens.imag(),
        outcomes: ens.outcomes,
    })
}

fn samplers(problem: &AdiabaticProblem, cfg: &EnergyEstimationConfig) -> Result<(TepaiSampler, TetrisSampler)> {
    let schedule = AdiabaticSchedule::linear(cfg.total_time)?;
    Ok((
        TepaiSampler::adiabatic(&problem.h_hf, &problem.h_int, &schedule, cfg.delta)?,
        TetrisSampler::new(&problem.h_hf, &problem.h_int, cfg.s, cfg.delta)?,
    ))
}

/// The first `count` (preparation, controlled evolution) pairs of the run.
pub fn energy_circuits(
    problem: &AdiabaticProblem,
    cfg: &EnergyEstimationConfig,
    count: usize,
) -> Result<Vec<(CircuitRecord, CircuitRecord)>> {
    let (prep, tetris) = samplers(problem, cfg)?;
    Ok((0..count.min(cfg.n_circuits))
        .map(|i| {
            let seeds = circuit_seeds(cfg.master_seed, i);
            (
                prep.sample(&mut seeds.rng(&[0])).record(),
                tetris.sample(&mut seeds.rng(&[1])).record(),
            )
        })
        .collect())
}

/// The estimator's infinite-sample limit: exact adiabatic state, exact
/// `exp(isH)` overlap, same inversion.
pub fn exact_energy_estimate(
    problem: &AdiabaticProblem,
    total_time: f64,
    s: f64,
    epsilon: f64,
    steps: usize,
) -> Result<f64> {
    let h0 = hamiltonian_matrix(&problem.h_hf);
    let h1 = hamiltonian_matrix(&problem.h_int);
    let psi = adiabatic_evolve(&h0, &h1, |x| x, total_time, &to_vector(&problem.hf_state), steps.max(1)).normalize();
    let v = expm_hermitian(&hamiltonian_matrix(&problem.hamiltonian), -s);
    let z = psi.dotc(&(&v * &psi));
    energy_from_overlap(z, problem.e_hf, epsilon, s)
}

/// Energy estimate with first-order Trotter circuits for both the
/// preparation and `exp(isH)`, evaluated exactly.
pub fn trotter_energy(
    problem: &AdiabaticProblem,
    total_time: f64,
    s: f64,
    epsilon: f64,
    steps: usize,
    gateset: GateSet,
) -> Result<TrotterPoint> {
    let cfg = TrotterConfig::new(steps)?;
    let schedule = AdiabaticSchedule::linear(total_time)?;
    let prep = trotter_adiabatic(&problem.h_hf, &problem.h_int, &schedule, cfg);
    let v = trotter_circuit(&problem.hamiltonian, -s, cfg);
    let mut psi = problem.hf_state.clone();
    apply_all(&mut psi, &prep)?;
    let mut vpsi: StateVector = psi.clone();
    apply_all(&mut vpsi, &v)?;
    let z = psi.inner(&vpsi)?;
    let n = problem.num_qubits();
    let prep_cost = compile_to_gateset(&prep, n, gateset)?.two_qubit_count();
    let controlled: Vec<_> = v.iter().map(|op| op.controlled(n)).collect::<Result<_>>()?;
    let v_cost = compile_to_gateset(&controlled, n + 1, gateset)?.two_qubit_count();
    Ok(TrotterPoint {
        steps,
        value: energy_from_overlap(z, problem.e_hf, epsilon, s)?,
        gates_2q: prep_cost + v_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_etas_invert_to_energy() {
        let (e_hf, eps, s) = (-1.93, 0.05, 10.0);
        for e in [-1.98, -1.95, -1.9] {
            let z = Complex64::from_polar(1.0, s * e);
            let got = energy_from_overlap(z, e_hf, eps, s).unwrap();
            assert!((got - e).abs() < 1e-13, "{got} {e}");
        }
    }

    #[test]
    fn common_rescaling_is_invariant() {
        let (a, b) = (0.31, -0.12);
        let e1 = energy_from_overlaps(a, b, -1.0, 0.05, 10.0).unwrap();
        let e2 = energy_from_overlaps(3.7 * a, 3.7 * b, -1.0, 0.05, 10.0).unwrap();
        assert!((e1 - e2).abs() < 1e-14);
    }

    #[test]
    fn equal_etas_are_singular() {
        assert!(matches!(
            energy_from_overlaps(0.2, 0.2, -1.0, 0.05, 10.0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn config_bounds() {
        let mut cfg = EnergyEstimationConfig {
            total_time: 8.0,
            s: 10.0,
            epsilon: 0.05,
            delta: 0.1,
            n_circuits: 1,
            shots: ShotMode::Exact,
            noise: NoiseModel::disabled(),
            post_selection: PostSelection::none(),
            master_seed: 0,
            gateset: GateSet::Cx,
            bootstrap_resamples: 10,
        };
        assert!(cfg.validate().is_ok());
        cfg.epsilon = 0.2;
        assert!(cfg.validate().is_err());
    }
}
