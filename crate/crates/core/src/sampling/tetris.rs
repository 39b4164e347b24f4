use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::rng::stream;
use crate::statevector::DiagonalHamiltonian;

use super::circuit::{CircuitMode, EventKind, GateEvent, SampledCircuit};
use super::formulas::validate_delta;

/// TETRIS sampler for the operator `exp(+isH)`, `H = H_HF + H_int`.
#[derive(Clone, Debug)]
pub struct TetrisSampler {
    terms: Arc<PauliHamiltonian>,
    diagonal: Arc<DiagonalHamiltonian>,
    s: f64,
    delta: f64,
    rates: Vec<Option<Poisson<f64>>>,
    normalization: f64,
}

impl TetrisSampler {
    pub fn new(h_hf: &PauliHamiltonian, h_int: &PauliHamiltonian, s: f64, delta: f64) -> Result<Self> {
        validate_delta(delta)?;
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "evolution parameter {s} must be finite and non-negative"
            )));
        }
        if h_hf.num_qubits() != h_int.num_qubits() {
            return Err(Error::LengthMismatch {
                left: h_hf.num_qubits(),
                right: h_int.num_qubits(),
            });
        }
        if h_int.identity_offset() != 0.0 {
            return Err(Error::InvalidParameter(
                "identity offset belongs to the diagonal part".into(),
            ));
        }
        let rates = h_int
            .terms()
            .iter()
            .map(|t| {
                let lambda = s * t.coeff.abs() / delta.sin();
                if lambda == 0.0 {
                    Ok(None)
                } else {
                    Poisson::new(lambda)
                        .map(Some)
                        .map_err(|e| Error::InvalidParameter(format!("Poisson rate {lambda}: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let normalization = (s * h_int.l1_norm() * (delta / 2.0).tan()).exp();
        Ok(TetrisSampler {
            terms: Arc::new(h_int.clone()),
            diagonal: Arc::new(DiagonalHamiltonian::new(h_hf.clone())?),
            s,
            delta,
            rates,
            normalization,
        })
    }

    /// Splits `h` into its diagonal single-Z part and the rest.
    pub fn from_hamiltonian(h: &PauliHamiltonian, s: f64, delta: f64) -> Result<Self> {
        let (hf, int) = h.split_hf();
        Self::new(&hf, &int, s, delta)
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledCircuit {
        let mut events = Vec::new();
        for (k, rate) in self.rates.iter().enumerate() {
            let Some(d) = rate else { continue };
            let count = d.sample(rng) as usize;
            for _ in 0..count {
                events.push(GateEvent {
                    time: self.s * rng.random::<f64>(),
                    term_index: k,
                    kind: EventKind::TetrisGate,
                });
            }
        }
        let mut c = SampledCircuit {
            mode: CircuitMode::Operator,
            duration: self.s,
            delta: self.delta,
            events,
            sign: 1.0,
            normalization: self.normalization,
            terms: Arc::clone(&self.terms),
            diagonal: Some(Arc::clone(&self.diagonal)),
        };
        c.sort_events();
        c
    }
}

pub fn sample_tetris(
    h_hf: &PauliHamiltonian,
    h_int: &PauliHamiltonian,
    s: f64,
    delta: f64,
    seed: u64,
) -> Result<SampledCircuit> {
    Ok(TetrisSampler::new(h_hf, h_int, s, delta)?.sample(&mut stream(seed, &[])))
}
