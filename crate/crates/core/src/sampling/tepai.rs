use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::rng::stream;
use crate::statevector::DiagonalHamiltonian;

use super::circuit::{CircuitMode, EventKind, GateEvent, SampledCircuit};
use super::formulas::validate_delta;
use super::schedule::AdiabaticSchedule;

#[derive(Clone, Debug)]
enum TimeMap {
    Uniform,
    Schedule(AdiabaticSchedule),
}

/// Continuous-time TE-PAI sampler with precomputed Poisson rates.
#[derive(Clone, Debug)]
pub struct TepaiSampler {
    terms: Arc<PauliHamiltonian>,
    diagonal: Option<Arc<DiagonalHamiltonian>>,
    duration: f64,
    delta: f64,
    times: TimeMap,
    interp: Vec<Option<Poisson<f64>>>,
    pi: Vec<Option<Poisson<f64>>>,
    normalization: f64,
}

fn poisson(lambda: f64) -> Result<Option<Poisson<f64>>> {
    if lambda == 0.0 {
        return Ok(None);
    }
    Poisson::new(lambda)
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("Poisson rate {lambda}: {e}")))
}

impl TepaiSampler {
    /// Samples the whole Hamiltonian, identity offset tracked as a phase.
    pub fn new(h: &PauliHamiltonian, t: f64, delta: f64) -> Result<Self> {
        Self::build(h.clone(), None, t, t, delta, TimeMap::Uniform)
    }

    /// Samples only the non-diagonal part; `H_HF` (single-Z terms and the
    /// identity offset) is simulated exactly between events.
    pub fn split(h: &PauliHamiltonian, t: f64, delta: f64) -> Result<Self> {
        let (hf, int) = h.split_hf();
        let diag = Arc::new(DiagonalHamiltonian::new(hf)?);
        Self::build(int, Some(diag), t, t, delta, TimeMap::Uniform)
    }

    /// Adiabatic path `H_HF + f(t/T) H_int`.
    pub fn adiabatic(
        h_hf: &PauliHamiltonian,
        h_int: &PauliHamiltonian,
        schedule: &AdiabaticSchedule,
        delta: f64,
    ) -> Result<Self> {
        if h_hf.num_qubits() != h_int.num_qubits() {
            return Err(Error::LengthMismatch {
                left: h_hf.num_qubits(),
                right: h_int.num_qubits(),
            });
        }
        let diag = Arc::new(DiagonalHamiltonian::new(h_hf.clone())?);
        let total = schedule.total_time();
        Self::build(
            h_int.clone(),
            Some(diag),
            total,
            total * schedule.z1(),
            delta,
            TimeMap::Schedule(schedule.clone()),
        )
    }

    fn build(
        terms: PauliHamiltonian,
        diagonal: Option<Arc<DiagonalHamiltonian>>,
        duration: f64,
        effective: f64,
        delta: f64,
        times: TimeMap,
    ) -> Result<Self> {
        validate_delta(delta)?;
        if !(duration >= 0.0 && duration.is_finite() && effective >= 0.0 && effective.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "evolution time {duration} must be finite and non-negative"
            )));
        }
        if diagonal.is_some() && terms.identity_offset() != 0.0 {
            return Err(Error::InvalidParameter(
                "identity offset belongs to the diagonal part".into(),
            ));
        }
        let tan = (delta / 2.0).tan();
        let mut interp = Vec::with_capacity(terms.len());
        let mut pi = Vec::with_capacity(terms.len());
        for term in terms.terms() {
            let a = term.coeff.abs();
            interp.push(poisson(2.0 * a * effective / delta.sin())?);
            pi.push(poisson(a * effective * tan)?);
        }
        let normalization = (2.0 * effective * terms.l1_norm() * tan).exp();
        Ok(TepaiSampler {
            terms: Arc::new(terms),
            diagonal,
            duration,
            delta,
            times,
            interp,
            pi,
            normalization,
        })
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn terms(&self) -> &Arc<PauliHamiltonian> {
        &self.terms
    }

    fn draw_time<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.times {
            TimeMap::Uniform => self.duration * rng.random::<f64>(),
            TimeMap::Schedule(s) => {
                let u = s.z1() * rng.random::<f64>();
                self.duration * s.z_inv(u)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledCircuit {
        let mut events = Vec::new();
        let mut n_pi = 0usize;
        for k in 0..self.terms.len() {
            for (dist, kind) in [(&self.interp[k], EventKind::Interp), (&self.pi[k], EventKind::Pi)] {
                let Some(d) = dist else { continue };
                let count = d.sample(rng) as usize;
                if kind == EventKind::Pi {
                    n_pi += count;
                }
                for _ in 0..count {
                    events.push(GateEvent {
                        time: self.draw_time(rng),
                        term_index: k,
                        kind,
                    });
                }
            }
        }
        let mut c = SampledCircuit {
            mode: CircuitMode::Channel,
            duration: self.duration,
            delta: self.delta,
            events,
            sign: if n_pi % 2 == 0 { 1.0 } else { -1.0 },
            normalization: self.normalization,
            terms: Arc::clone(&self.terms),
            diagonal: self.diagonal.clone(),
        };
        c.sort_events();
        c
    }
}

/// One whole-Hamiltonian TE-PAI circuit for `exp(-itH)`.
pub fn sample_tepai(h: &PauliHamiltonian, t: f64, delta: f64, seed: u64) -> Result<SampledCircuit> {
    Ok(TepaiSampler::new(h, t, delta)?.sample(&mut stream(seed, &[])))
}

/// One TE-PAI circuit for the adiabatic path `H_HF + f(t/T) H_int`.
pub fn sample_adiabatic_tepai(
    h_hf: &PauliHamiltonian,
    h_int: &PauliHamiltonian,
    schedule: &AdiabaticSchedule,
    delta: f64,
    seed: u64,
) -> Result<SampledCircuit> {
    Ok(TepaiSampler::adiabatic(h_hf, h_int, schedule, delta)?.sample(&mut stream(seed, &[])))
}
