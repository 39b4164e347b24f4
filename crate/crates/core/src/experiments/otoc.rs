use serde::{Deserialize, Serialize};

use crate::compile::GateSet;
use crate::dense::{hamiltonian_matrix, otoc_with, HermitianEigen};
use crate::error::{Error, Result};
use crate::estimate::{
    circuit_seeds, propagate_zne_error, run_ensemble, zne, CircuitInstance, CircuitOutcome,
    EnsembleConfig, EstimatorResult, Measurement, PostSelection, ShotMode,
};
use crate::gates::GateOp;
use crate::hamiltonian::PauliHamiltonian;
use crate::noise::NoiseModel;
use crate::pauli::{majorana_operator, PhasedPauli};
use crate::rng::{derive_seed, SeedStream};
use crate::sampling::{CircuitRecord, Direction, SampledCircuit, TepaiSampler};
use crate::statevector::StateVector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtocConfig {
    pub i: usize,
    pub j: usize,
    /// Coupling scale; circuit time is `Jt / J`.
    pub coupling: f64,
    /// Interpolation angles, usually a pair for extrapolation.
    pub deltas: Vec<f64>,
    /// Circuits per angle.
    pub n_circuits: Vec<usize>,
    pub shots: ShotMode,
    pub noise: NoiseModel,
    /// Post-select the system register on odd parity.
    pub odd_parity: bool,
    pub master_seed: u64,
    #[serde(default)]
    pub gateset: GateSet,
}

impl OtocConfig {
    pub fn validate(&self, n_majorana: usize) -> Result<()> {
        if self.i == self.j || self.i >= n_majorana || self.j >= n_majorana {
            return Err(Error::InvalidParameter(format!(
                "Majorana indices ({}, {}) must be distinct and below {n_majorana}",
                self.i, self.j
            )));
        }
        if self.deltas.is_empty() || self.deltas.len() != self.n_circuits.len() {
            return Err(Error::InvalidParameter(
                "one circuit count per interpolation angle is required".into(),
            ));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(Error::InvalidParameter("coupling must be positive".into()));
        }
        self.noise.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtocPoint {
    pub jt: f64,
    pub results: Vec<(f64, EstimatorResult)>,
    /// Extrapolated value and its propagated error, from the first two angles.
    pub zne: Option<(f64, f64)>,
    pub exact: f64,
    /// Per-circuit outcomes, one list per angle.
    #[serde(skip)]
    pub outcomes: Vec<Vec<CircuitOutcome>>,
}

/// Interferometer for `Re <gamma_j(t) gamma_i gamma_j(t) gamma_i>`: ancilla
/// `|+>` above the system, controlled `gamma_i`, `U_1`, `gamma_j`,
/// `U_2^dag`, controlled `gamma_i`, ancilla measured in X.
pub fn otoc_circuit(
    gamma_i: &PhasedPauli,
    gamma_j: &PhasedPauli,
    u1: &SampledCircuit,
    u2: &SampledCircuit,
) -> Result<CircuitInstance> {
    let n = u1.num_qubits();
    let mut ops = vec![
        GateOp::Hadamard(n),
        GateOp::Pauli {
            pauli: *gamma_i,
            control: Some(n),
        },
    ];
    ops.extend(u1.to_gateops(Direction::Forward, None)?);
    ops.push(GateOp::Pauli {
        pauli: *gamma_j,
        control: None,
    });
    ops.extend(u2.to_gateops(Direction::Adjoint, None)?);
    ops.push(GateOp::Pauli {
        pauli: *gamma_i,
        control: Some(n),
    });
    Ok(CircuitInstance {
        initial: StateVector::zero(n + 1),
        ops,
        weight: u1.weight() * u2.weight(),
        measurement: Measurement::AncillaX { ancilla: n },
    })
}

fn majoranas(h: &PauliHamiltonian, cfg: &OtocConfig) -> Result<(PhasedPauli, PhasedPauli)> {
    let n = h.num_qubits();
    cfg.validate(2 * n)?;
    Ok((
        majorana_operator(cfg.i, n)?.into(),
        majorana_operator(cfg.j, n)?.into(),
    ))
}

/// TE-PAI ensemble estimates of the OTOC at one time, one per angle, plus
/// the extrapolated value and the dense reference.
pub fn otoc_point(h: &PauliHamiltonian, cfg: &OtocConfig, jt: f64) -> Result<OtocPoint> {
    let eig = HermitianEigen::new(&hamiltonian_matrix(h));
    otoc_point_with(h, &eig, cfg, jt)
}

fn otoc_point_with(h: &PauliHamiltonian, eig: &HermitianEigen, cfg: &OtocConfig, jt: f64) -> Result<OtocPoint> {
    let (gi, gj) = majoranas(h, cfg)?;
    let n = h.num_qubits();
    let t = jt / cfg.coupling;
    let mut results = Vec::with_capacity(cfg.deltas.len());
    let mut outcomes = Vec::with_capacity(cfg.deltas.len());
    for (k, (&delta, &n_circuits)) in cfg.deltas.iter().zip(&cfg.n_circuits).enumerate() {
        let sampler = TepaiSampler::split(h, t, delta)?;
        let factory = |_: usize, seeds: &SeedStream| -> Result<CircuitInstance> {
            let u1 = sampler.sample(&mut seeds.rng(&[1]));
            let u2 = sampler.sample(&mut seeds.rng(&[2]));
            otoc_circuit(&gi, &gj, &u1, &u2)
        };
        let ens_cfg = EnsembleConfig {
            n_circuits,
            shots: cfg.shots,
            noise: cfg.noise,
            post_selection: if cfg.odd_parity {
                PostSelection::odd(0..n)
            } else {
                PostSelection::none()
            },
            master_seed: point_seed(cfg, jt, k),
            gateset: cfg.gateset,
            count_gates: true,
            delta: Some(delta),
        };
        let ens = run_ensemble(&ens_cfg, &factory)?;
        results.push((delta, ens.real()));
        outcomes.push(ens.outcomes);
    }
    let zne_value = if results.len() >= 2 {
        let (d1, r1) = &results[0];
        let (d2, r2) = &results[1];
        Some((
            zne(*d1, r1.mean, *d2, r2.mean)?,
            propagate_zne_error(r1.stderr, r2.stderr, *d1, *d2)?,
        ))
    } else {
        None
    };
    Ok(OtocPoint {
        jt,
        results,
        zne: zne_value,
        exact: otoc_with(eig, &gi.string, &gj.string, t).re,
        outcomes,
    })
}

fn point_seed(cfg: &OtocConfig, jt: f64, k: usize) -> u64 {
    derive_seed(cfg.master_seed, &[jt.to_bits(), k as u64])
}

/// The first `count` `(U_1, U_2)` pairs sampled at time `jt` for angle
/// number `k`.
pub fn otoc_circuits(
    h: &PauliHamiltonian,
    cfg: &OtocConfig,
    jt: f64,
    k: usize,
    count: usize,
) -> Result<Vec<(CircuitRecord, CircuitRecord)>> {
    majoranas(h, cfg)?;
    let (&delta, &n_circuits) = cfg
        .deltas
        .get(k)
        .zip(cfg.n_circuits.get(k))
        .ok_or_else(|| Error::InvalidParameter(format!("no angle number {k}")))?;
    let sampler = TepaiSampler::split(h, jt / cfg.coupling, delta)?;
    let master = point_seed(cfg, jt, k);
    Ok((0..count.min(n_circuits))
        .map(|i| {
            let seeds = circuit_seeds(master, i);
            (
                sampler.sample(&mut seeds.rng(&[1])).record(),
                sampler.sample(&mut seeds.rng(&[2])).record(),
            )
        })
        .collect())
}

pub fn otoc_series(h: &PauliHamiltonian, cfg: &OtocConfig, jts: &[f64]) -> Result<Vec<OtocPoint>> {
    let eig = HermitianEigen::new(&hamiltonian_matrix(h));
    jts.iter().map(|&jt| otoc_point_with(h, &eig, cfg, jt)).collect()
}
