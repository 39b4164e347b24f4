//! Weighted ensemble estimation: per-circuit importance weights, exact or
//! shot-based readout, parity post-selection, and two-point zero-noise
//! extrapolation.

use std::sync::Arc;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compile::{compile_to_gateset, CompiledCircuit, GateSet};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliString};
use crate::rng::{stream, SeedStream};
use crate::sampling::{Direction, SampledCircuit};
use crate::statevector::StateVector;

/// Role id of the engine's own stream (shots and noise); factories should
/// use other ids.
pub const ENGINE_ROLE: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    #[default]
    None,
}

/// Keeps only outcomes whose bits on `qubits` have the requested parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct PostSelection {
    pub parity: Parity,
    pub qubits: Vec<usize>,
}

impl PostSelection {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn even(qubits: impl IntoIterator<Item = usize>) -> Self {
        PostSelection {
            parity: Parity::Even,
            qubits: qubits.into_iter().collect(),
        }
    }

    pub fn odd(qubits: impl IntoIterator<Item = usize>) -> Self {
        PostSelection {
            parity: Parity::Odd,
            qubits: qubits.into_iter().collect(),
        }
    }

    fn mask(&self) -> u64 {
        self.qubits.iter().fold(0, |m, &q| m | 1 << q)
    }

    pub fn accepts(&self, bits: u64) -> bool {
        let ones = (bits & self.mask()).count_ones();
        match self.parity {
            Parity::None => true,
            Parity::Even => ones % 2 == 0,
            Parity::Odd => ones % 2 == 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShotMode {
    /// Expectation values read from amplitudes.
    Exact,
    /// Finite number of shots per circuit.
    Shots(usize),
}

/// What is read out at the end of a circuit.
#[derive(Clone, Debug)]
pub enum Measurement {
    /// `|<target|psi>|^2`, exact mode only.
    Overlap(Arc<StateVector>),
    /// Real expectation of a Pauli string.
    Pauli(PauliString),
    /// Ancilla `<X>`.
    AncillaX { ancilla: usize },
    /// Ancilla `<X> + i <Y>`; X and Y shots are split evenly.
    AncillaXY { ancilla: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Re,
    Im,
}

struct Setting {
    component: Component,
    basis: Vec<GateOp>,
    mask: u64,
}

impl Measurement {
    fn settings(&self) -> Vec<Setting> {
        let ancilla_x = |a: usize| vec![GateOp::Hadamard(a)];
        let ancilla_y = |a: usize| vec![GateOp::Sdg(a), GateOp::Hadamard(a)];
        match self {
            Measurement::Overlap(_) => Vec::new(),
            Measurement::Pauli(p) => {
                let mut basis = Vec::new();
                for q in p.support() {
                    match p.get(q) {
                        Pauli::X => basis.push(GateOp::Hadamard(q)),
                        Pauli::Y => {
                            basis.push(GateOp::Sdg(q));
                            basis.push(GateOp::Hadamard(q));
                        }
                        _ => {}
                    }
                }
                vec![Setting {
                    component: Component::Re,
                    basis,
                    mask: p.support_mask(),
                }]
            }
            Measurement::AncillaX { ancilla } => vec![Setting {
                component: Component::Re,
                basis: ancilla_x(*ancilla),
                mask: 1 << ancilla,
            }],
            Measurement::AncillaXY { ancilla } => vec![
                Setting {
                    component: Component::Re,
                    basis: ancilla_x(*ancilla),
                    mask: 1 << ancilla,
                },
                Setting {
                    component: Component::Im,
                    basis: ancilla_y(*ancilla),
                    mask: 1 << ancilla,
                },
            ],
        }
    }

    fn ancilla(&self) -> Option<usize> {
        match self {
            Measurement::AncillaX { ancilla } | Measurement::AncillaXY { ancilla } => Some(*ancilla),
            _ => None,
        }
    }
}

/// A fully specified circuit: initial state, operations, weight and readout.
#[derive(Clone, Debug)]
pub struct CircuitInstance {
    pub initial: StateVector,
    pub ops: Vec<GateOp>,
    pub weight: f64,
    pub measurement: Measurement,
}

/// Builds circuit `index` from its seed stream.
pub trait CircuitFactory: Sync {
    fn build(&self, index: usize, seeds: &SeedStream) -> Result<CircuitInstance>;
}

impl<F> CircuitFactory for F
where
    F: Fn(usize, &SeedStream) -> Result<CircuitInstance> + Sync,
{
    fn build(&self, index: usize, seeds: &SeedStream) -> Result<CircuitInstance> {
        self(index, seeds)
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleConfig {
    pub n_circuits: usize,
    pub shots: ShotMode,
    pub noise: NoiseModel,
    pub post_selection: PostSelection,
    pub master_seed: u64,
    pub gateset: GateSet,
    /// Compile each circuit to count two-qubit gates.
    pub count_gates: bool,
    /// Interpolation angle, recorded in metadata only.
    pub delta: Option<f64>,
}

impl EnsembleConfig {
    pub fn exact(n_circuits: usize, master_seed: u64) -> Self {
        EnsembleConfig {
            n_circuits,
            shots: ShotMode::Exact,
            noise: NoiseModel::disabled(),
            post_selection: PostSelection::none(),
            master_seed,
            gateset: GateSet::Cx,
            count_gates: false,
            delta: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorMetadata {
    pub delta: Option<f64>,
    pub master_seed: u64,
    pub noise: NoiseModel,
    pub cost_model: String,
    pub shot_mode: ShotMode,
    pub post_selection: PostSelection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: f64,
    pub stderr: f64,
    pub n_circuits: usize,
    pub n_shots_total: usize,
    pub n_postselected: usize,
    /// Accepted-shot fraction; mean acceptance probability in exact mode.
    pub accepted_fraction: f64,
    pub n_invalid: usize,
    pub gates_2q_mean: Option<f64>,
    pub gates_2q_std: Option<f64>,
    pub metadata: EstimatorMetadata,
}

/// Per-circuit record, sufficient to re-aggregate without re-simulating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitOutcome {
    pub index: usize,
    pub seed: u64,
    pub weight: f64,
    /// Unweighted real-part readout; `None` if not measured on this circuit.
    pub raw_re: Option<f64>,
    pub raw_im: Option<f64>,
    pub shots: usize,
    pub accepted_shots: usize,
    pub acceptance: f64,
    pub invalid: bool,
    pub gates_2q: Option<usize>,
}

impl CircuitOutcome {
    pub fn weighted(&self, c: Component) -> Option<f64> {
        let raw = match c {
            Component::Re => self.raw_re,
            Component::Im => self.raw_im,
        };
        raw.map(|v| self.weight * v)
    }
}

#[derive(Clone, Debug)]
pub struct Ensemble {
    pub outcomes: Vec<CircuitOutcome>,
    pub metadata: EstimatorMetadata,
}

/// Mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

impl Ensemble {
    pub fn values(&self, c: Component) -> Vec<f64> {
        self.outcomes.iter().filter_map(|o| o.weighted(c)).collect()
    }

    pub fn result(&self, c: Component) -> EstimatorResult {
        let values = self.values(c);
        let (mean, stderr) = mean_stderr(&values);
        let n_shots_total = self.outcomes.iter().map(|o| o.shots).sum::<usize>();
        let n_postselected = self.outcomes.iter().map(|o| o.accepted_shots).sum::<usize>();
        let accepted_fraction = if n_shots_total > 0 {
            n_postselected as f64 / n_shots_total as f64
        } else {
            self.outcomes.iter().map(|o| o.acceptance).sum::<f64>() / self.outcomes.len().max(1) as f64
        };
        let gates: Vec<f64> = self
            .outcomes
            .iter()
            .filter_map(|o| o.gates_2q.map(|g| g as f64))
            .collect();
        let (gates_2q_mean, gates_2q_std) = if gates.is_empty() {
            (None, None)
        } else {
            let (m, se) = mean_stderr(&gates);
            (Some(m), Some(se * (gates.len() as f64).sqrt()))
        };
        EstimatorResult {
            mean,
            stderr,
            n_circuits: values.len(),
            n_shots_total,
            n_postselected,
            accepted_fraction,
            n_invalid: self.outcomes.iter().filter(|o| o.invalid).count(),
            gates_2q_mean,
            gates_2q_std,
            metadata: self.metadata.clone(),
        }
    }

    pub fn real(&self) -> EstimatorResult {
        self.result(Component::Re)
    }

    pub fn imag(&self) -> EstimatorResult {
        self.result(Component::Im)
    }

    /// Weighted complex mean over the given circuit indices (with repeats).
    pub fn complex_mean_of(&self, indices: &[usize]) -> Complex64 {
        let mut acc = [(0.0, 0usize); 2];
        for &i in indices {
            let o = &self.outcomes[i];
            for (slot, c) in acc.iter_mut().zip([Component::Re, Component::Im]) {
                if let Some(v) = o.weighted(c) {
                    slot.0 += v;
                    slot.1 += 1;
                }
            }
        }
        let part = |(s, n): (f64, usize)| if n == 0 { 0.0 } else { s / n as f64 };
        Complex64::new(part(acc[0]), part(acc[1]))
    }

    pub fn complex_mean(&self) -> Complex64 {
        let all: Vec<usize> = (0..self.outcomes.len()).collect();
        self.complex_mean_of(&all)
    }
}

struct Readout {
    value: Option<f64>,
    shots: usize,
    accepted: usize,
    acceptance: f64,
}

fn probabilities(state: &StateVector, basis: &[GateOp]) -> Result<Vec<f64>> {
    let mut s = state.clone();
    for g in basis {
        g.apply(&mut s)?;
    }
    Ok(s.amplitudes().iter().map(|a| a.norm_sqr()).collect())
}

fn eigen(bits: u64, mask: u64) -> f64 {
    if (bits & mask).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn exact_readout(p: &[f64], setting: &Setting, post: &PostSelection) -> Readout {
    let (mut num, mut den) = (0.0, 0.0);
    for (b, &pb) in p.iter().enumerate() {
        if post.accepts(b as u64) {
            num += pb * eigen(b as u64, setting.mask);
            den += pb;
        }
    }
    Readout {
        value: if den > 1e-14 { Some(num / den) } else { None },
        shots: 0,
        accepted: 0,
        acceptance: if post.parity == Parity::None { 1.0 } else { den },
    }
}

fn sample_bits<R: Rng + ?Sized>(p: &[f64], shots: usize, rng: &mut R) -> Result<Vec<u64>> {
    let dist = WeightedIndex::new(p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((0..shots).map(|_| dist.sample(rng) as u64).collect())
}

fn shot_readout(bits: &[u64], setting: &Setting, post: &PostSelection) -> Readout {
    let mut sum = 0.0;
    let mut accepted = 0;
    for &b in bits {
        if post.accepts(b) {
            sum += eigen(b, setting.mask);
            accepted += 1;
        }
    }
    Readout {
        value: if accepted > 0 { Some(sum / accepted as f64) } else { None },
        shots: bits.len(),
        accepted,
        acceptance: if bits.is_empty() { 0.0 } else { accepted as f64 / bits.len() as f64 },
    }
}

fn split_shots(total: usize, settings: usize, index: usize) -> Vec<usize> {
    let base = total / settings;
    let extra = total % settings;
    (0..settings)
        .map(|k| base + usize::from((k + settings - index % settings) % settings < extra))
        .collect()
}

fn run_one(
    cfg: &EnsembleConfig,
    factory: &dyn CircuitFactory,
    index: usize,
) -> Result<CircuitOutcome> {
    let seeds = circuit_seeds(cfg.master_seed, index);
    let inst = factory.build(index, &seeds)?;
    let n = inst.initial.num_qubits();
    for &q in &cfg.post_selection.qubits {
        if q >= n || Some(q) == inst.measurement.ancilla() {
            return Err(Error::IndexOutOfRange { index: q, limit: n });
        }
    }
    let noisy = cfg.noise.is_active();
    let compiled: Option<CompiledCircuit> = if noisy || cfg.count_gates {
        Some(compile_to_gateset(&inst.ops, n, cfg.gateset)?)
    } else {
        None
    };
    let gates_2q = compiled.as_ref().map(CompiledCircuit::two_qubit_count);
    let mut rng = seeds.rng(&[ENGINE_ROLE]);
    let evolve = |rng: &mut crate::rng::StreamRng| -> Result<StateVector> {
        let mut s = inst.initial.clone();
        match (&compiled, noisy) {
            (Some(c), true) => crate::compile::run_noisy(&mut s, c, &cfg.noise, rng)?,
            _ => crate::gates::apply_all(&mut s, &inst.ops)?,
        }
        Ok(s)
    };

    let mut out = CircuitOutcome {
        index,
        seed: seeds.seed(&[]),
        weight: inst.weight,
        raw_re: None,
        raw_im: None,
        shots: 0,
        accepted_shots: 0,
        acceptance: 1.0,
        invalid: false,
        gates_2q,
    };

    if let Measurement::Overlap(target) = &inst.measurement {
        if cfg.shots != ShotMode::Exact {
            return Err(Error::InvalidParameter(
                "overlap readout requires exact mode".into(),
            ));
        }
        let s = evolve(&mut rng)?;
        out.raw_re = Some(target.inner(&s)?.norm_sqr());
        return Ok(out);
    }

    let settings = inst.measurement.settings();
    let mut readouts = Vec::with_capacity(settings.len());
    match cfg.shots {
        ShotMode::Exact => {
            let s = evolve(&mut rng)?;
            for st in &settings {
                readouts.push(exact_readout(&probabilities(&s, &st.basis)?, st, &cfg.post_selection));
            }
        }
        ShotMode::Shots(total) => {
            if total == 0 {
                return Err(Error::InvalidParameter("shots must be at least 1".into()));
            }
            let alloc = split_shots(total, settings.len(), index);
            let shared = if noisy { None } else { Some(evolve(&mut rng)?) };
            for (st, &k) in settings.iter().zip(&alloc) {
                if k == 0 {
                    readouts.push(Readout {
                        value: None,
                        shots: 0,
                        accepted: 0,
                        acceptance: 1.0,
                    });
                    continue;
                }
                let bits = match &shared {
                    Some(s) => sample_bits(&probabilities(s, &st.basis)?, k, &mut rng)?,
                    None => {
                        let mut bits = Vec::with_capacity(k);
                        for _ in 0..k {
                            let s = evolve(&mut rng)?;
                            bits.extend(sample_bits(&probabilities(&s, &st.basis)?, 1, &mut rng)?);
                        }
                        bits
                    }
                };
                readouts.push(shot_readout(&bits, st, &cfg.post_selection));
            }
        }
    }

    let mut acceptance = Vec::new();
    for (st, r) in settings.iter().zip(&readouts) {
        out.shots += r.shots;
        out.accepted_shots += r.accepted;
        let measured = cfg.shots == ShotMode::Exact || r.shots > 0;
        if !measured {
            continue;
        }
        acceptance.push(r.acceptance);
        let v = match r.value {
            Some(v) => v,
            None => {
                out.invalid = true;
                0.0
            }
        };
        match st.component {
            Component::Re => out.raw_re = Some(v),
            Component::Im => out.raw_im = Some(v),
        }
    }
    if !acceptance.is_empty() {
        out.acceptance = acceptance.iter().sum::<f64>() / acceptance.len() as f64;
    }
    Ok(out)
}

/// Streams handed to the factory for circuit `index`.
pub fn circuit_seeds(master_seed: u64, index: usize) -> SeedStream {
    SeedStream::new(master_seed, &[index as u64])
}

/// Runs `cfg.n_circuits` circuits in parallel. Each circuit draws from
/// streams addressed by `(master_seed, index)`, and the reduction is done in
/// index order, so results do not depend on the worker count.
pub fn run_ensemble(cfg: &EnsembleConfig, factory: &dyn CircuitFactory) -> Result<Ensemble> {
    if cfg.n_circuits == 0 {
        return Err(Error::InvalidParameter("need at least one circuit".into()));
    }
    cfg.noise.validate()?;
    let outcomes = (0..cfg.n_circuits)
        .into_par_iter()
        .map(|i| run_one(cfg, factory, i))
        .collect::<Result<Vec<_>>>()?;
    if outcomes.iter().all(|o| o.invalid) {
        return Err(Error::AllShotsRejected);
    }
    Ok(Ensemble {
        outcomes,
        metadata: EstimatorMetadata {
            delta: cfg.delta,
            master_seed: cfg.master_seed,
            noise: cfg.noise,
            cost_model: cfg.gateset.cost_model_tag().to_string(),
            shot_mode: cfg.shots,
            post_selection: cfg.post_selection.clone(),
        },
    })
}

/// Hadamard-test circuit for `<psi|V|psi>` with `|psi> = prep |initial>`:
/// ancilla `|+>` above the system, `prep` uncontrolled, `V` controlled.
/// The weight is the product of both circuits' weights.
pub fn hadamard_test_instance(
    initial: &StateVector,
    prep: Option<&SampledCircuit>,
    v: &SampledCircuit,
) -> Result<CircuitInstance> {
    let n = initial.num_qubits();
    if v.num_qubits() != n {
        return Err(Error::LengthMismatch {
            left: v.num_qubits(),
            right: n,
        });
    }
    let mut ops = vec![GateOp::Hadamard(n)];
    let mut weight = v.weight();
    if let Some(p) = prep {
        ops.extend(p.to_gateops(Direction::Forward, None)?);
        weight *= p.weight();
    }
    ops.extend(v.to_gateops(Direction::Forward, Some(n))?);
    Ok(CircuitInstance {
        initial: initial.extended(1),
        ops,
        weight,
        measurement: Measurement::AncillaXY { ancilla: n },
    })
}

/// Single-circuit Hadamard-test estimate, weight included.
pub fn hadamard_overlap(
    initial: &StateVector,
    prep: Option<&SampledCircuit>,
    v: &SampledCircuit,
    shots: ShotMode,
    noise: &NoiseModel,
    post_selection: &PostSelection,
    seed: u64,
) -> Result<Complex64> {
    if v.mode != crate::sampling::CircuitMode::Operator {
        return Err(Error::InvalidParameter(
            "Hadamard test needs an operator-mode circuit".into(),
        ));
    }
    let inst = hadamard_test_instance(initial, prep, v)?;
    let cfg = EnsembleConfig {
        n_circuits: 1,
        shots,
        noise: *noise,
        post_selection: post_selection.clone(),
        master_seed: seed,
        gateset: GateSet::Cx,
        count_gates: false,
        delta: Some(v.delta),
    };
    let ens = run_ensemble(&cfg, &move |_: usize, _: &SeedStream| Ok(inst.clone()))?;
    Ok(ens.complex_mean())
}

fn check_distinct(d1: f64, d2: f64) -> Result<()> {
    if d1 == d2 {
        return Err(Error::InvalidParameter(
            "extrapolation needs two distinct angles".into(),
        ));
    }
    Ok(())
}

/// Linear extrapolation in `1/delta` to the zero-gate limit.
pub fn zne(d1: f64, y1: f64, d2: f64, y2: f64) -> Result<f64> {
    check_distinct(d1, d2)?;
    Ok((d1 * y1 - d2 * y2) / (d1 - d2))
}

pub fn propagate_zne_error(s1: f64, s2: f64, d1: f64, d2: f64) -> Result<f64> {
    check_distinct(d1, d2)?;
    if s1 < 0.0 || s2 < 0.0 {
        return Err(Error::InvalidParameter("negative standard error".into()));
    }
    Ok(((d1 * s1).powi(2) + (d2 * s2).powi(2)).sqrt() / (d1 - d2).abs())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZnePair {
    pub delta_1: f64,
    pub result_1: EstimatorResult,
    pub delta_2: f64,
    pub result_2: EstimatorResult,
}

impl ZnePair {
    pub fn mitigated(&self) -> Result<(f64, f64)> {
        Ok((
            zne(self.delta_1, self.result_1.mean, self.delta_2, self.result_2.mean)?,
            propagate_zne_error(
                self.result_1.stderr,
                self.result_2.stderr,
                self.delta_1,
                self.delta_2,
            )?,
        ))
    }
}

/// Bootstrap standard error of `statistic` over resampled circuit indices.
/// Resamples for which the statistic fails are skipped.
pub fn bootstrap_stderr(
    n: usize,
    resamples: usize,
    seed: u64,
    statistic: impl Fn(&[usize]) -> Result<f64> + Sync,
) -> f64 {
    let values: Vec<f64> = (0..resamples)
        .into_par_iter()
        .filter_map(|r| {
            let mut rng = stream(seed, &[r as u64]);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            statistic(&idx).ok().filter(|v| v.is_finite())
        })
        .collect();
    let (_, se) = mean_stderr(&values);
    se * (values.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PauliHamiltonian;
    use crate::sampling::TetrisSampler;

    fn fixed(value_state: StateVector, weight: f64) -> impl Fn(usize, &SeedStream) -> Result<CircuitInstance> + Sync {
        move |_, _| {
            Ok(CircuitInstance {
                initial: value_state.clone(),
                ops: Vec::new(),
                weight,
                measurement: Measurement::Pauli("Z".parse().unwrap()),
            })
        }
    }

    #[test]
    fn deterministic_factory_has_zero_error() {
        let cfg = EnsembleConfig::exact(17, 3);
        let r = run_ensemble(&cfg, &fixed(StateVector::basis(1, 1), 2.5)).unwrap().real();
        assert_eq!(r.mean, -2.5);
        assert_eq!(r.stderr, 0.0);
        assert_eq!(r.n_circuits, 17);
    }

    #[test]
    fn shot_split_alternates() {
        assert_eq!(split_shots(1, 2, 0), vec![1, 0]);
        assert_eq!(split_shots(1, 2, 1), vec![0, 1]);
        assert_eq!(split_shots(5, 2, 0), vec![3, 2]);
        assert_eq!(split_shots(5, 2, 3), vec![2, 3]);
        assert_eq!(split_shots(4, 1, 9), vec![4]);
    }

    #[test]
    fn parity_none_accepts_everything() {
        let p = PostSelection {
            parity: Parity::None,
            qubits: vec![0, 1],
        };
        assert!((0..4).all(|b| p.accepts(b)));
        assert!(PostSelection::even([0, 1]).accepts(0b11));
        assert!(!PostSelection::odd([0, 1]).accepts(0b11));
    }

    #[test]
    fn all_rejected_is_an_error() {
        let mut cfg = EnsembleConfig::exact(3, 1);
        cfg.post_selection = PostSelection::odd([0]);
        let err = run_ensemble(&cfg, &fixed(StateVector::zero(1), 1.0)).unwrap_err();
        assert_eq!(err, Error::AllShotsRejected);
    }

    #[test]
    fn identity_operator_overlap_is_one() {
        let h = PauliHamiltonian::parse("0.3 XX\n0.2 ZI").unwrap();
        let v = TetrisSampler::from_hamiltonian(&h, 0.0, 0.4).unwrap().sample(&mut stream(1, &[]));
        let z = hadamard_overlap(
            &StateVector::basis(2, 1),
            None,
            &v,
            ShotMode::Exact,
            &NoiseModel::disabled(),
            &PostSelection::none(),
            0,
        )
        .unwrap();
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_z_phase() {
        let c = 0.37;
        let s = 2.1;
        let h = PauliHamiltonian::parse(&format!("{c} Z")).unwrap();
        let v = TetrisSampler::from_hamiltonian(&h, s, 0.4).unwrap().sample(&mut stream(1, &[]));
        assert!(v.events.is_empty());
        let z = hadamard_overlap(
            &StateVector::zero(1),
            None,
            &v,
            ShotMode::Exact,
            &NoiseModel::disabled(),
            &PostSelection::none(),
            0,
        )
        .unwrap();
        assert!((z - Complex64::from_polar(1.0, s * c)).norm() < 1e-13);
    }

    #[test]
    fn zne_formulas() {
        assert!((zne(0.1, 0.7, 0.3, 0.7).unwrap() - 0.7).abs() < 1e-15);
        let (a, b) = (0.42, -0.013);
        let y = |d: f64| a + b * 2.0 * 1.7 * 0.9 / d;
        assert!((zne(0.05, y(0.05), 0.1, y(0.1)).unwrap() - a).abs() < 1e-12);
        assert!(zne(0.1, 1.0, 0.1, 2.0).is_err());
        assert_eq!(propagate_zne_error(0.0, 0.0, 0.1, 0.2).unwrap(), 0.0);
        let s = 0.3;
        assert!((propagate_zne_error(s, s, 0.1, 0.2).unwrap() - s * 5f64.sqrt()).abs() < 1e-12);
    }
}
