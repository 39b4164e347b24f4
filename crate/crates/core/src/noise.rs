//! Depolarizing noise as stochastic Pauli trajectories.
//!
//! With probability `lambda` one of the `4^k - 1` non-identity Paulis on the
//! `k` affected qubits is applied, uniformly; otherwise nothing happens.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::statevector::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub lambda_1q: f64,
    pub lambda_2q: f64,
    #[serde(default = "enabled_default")]
    pub enabled: bool,
}

fn enabled_default() -> bool {
    true
}

impl NoiseModel {
    pub fn new(lambda_1q: f64, lambda_2q: f64) -> Result<Self> {
        let m = NoiseModel {
            lambda_1q,
            lambda_2q,
            enabled: true,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn disabled() -> Self {
        NoiseModel {
            lambda_1q: 0.0,
            lambda_2q: 0.0,
            enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for l in [self.lambda_1q, self.lambda_2q] {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::InvalidParameter(format!(
                    "depolarizing probability {l} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn is_active(&self) -> bool {
        self.enabled && (self.lambda_1q > 0.0 || self.lambda_2q > 0.0)
    }

    pub fn probability_for(&self, n_qubits: usize) -> f64 {
        match n_qubits {
            0 => 0.0,
            1 => self.lambda_1q,
            _ => self.lambda_2q,
        }
    }
}

/// Applies one depolarizing trajectory step on `qubits` (one or two of them)
/// and returns the Pauli that was inserted, if any.
pub fn apply_depolarizing<R: Rng + ?Sized>(
    state: &mut StateVector,
    qubits: &[usize],
    lambda: f64,
    rng: &mut R,
) -> Result<Option<PauliString>> {
    if qubits.is_empty() || qubits.len() > 2 {
        return Err(Error::InvalidParameter(format!(
            "depolarizing acts on 1 or 2 qubits, got {}",
            qubits.len()
        )));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "depolarizing probability {lambda} outside [0, 1]"
        )));
    }
    if lambda == 0.0 || rng.random::<f64>() >= lambda {
        return Ok(None);
    }
    let k = qubits.len();
    let choice = rng.random_range(1..(1usize << (2 * k)));
    let mut p = PauliString::identity(state.num_qubits())?;
    for (i, &q) in qubits.iter().enumerate() {
        let letter = match (choice >> (2 * i)) & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        };
        if q >= state.num_qubits() {
            return Err(Error::IndexOutOfRange {
                index: q,
                limit: state.num_qubits(),
            });
        }
        p.set(q, letter);
    }
    state.apply_pauli(&p.into(), None)?;
    Ok(Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_lambda_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = StateVector::random(2, &mut rng);
        let before = s.clone();
        for _ in 0..100 {
            assert_eq!(apply_depolarizing(&mut s, &[0, 1], 0.0, &mut rng).unwrap(), None);
        }
        assert_eq!(s, before);
    }

    #[test]
    fn full_lambda_is_uniform_over_xyz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0usize; 4];
        let draws = 10_000;
        for _ in 0..draws {
            let mut s = StateVector::zero(1);
            let p = apply_depolarizing(&mut s, &[0], 1.0, &mut rng).unwrap().unwrap();
            counts[match p.get(0) {
                Pauli::I => 0,
                Pauli::X => 1,
                Pauli::Y => 2,
                Pauli::Z => 3,
            }] += 1;
        }
        assert_eq!(counts[0], 0);
        let expect = draws as f64 / 3.0;
        let sigma = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in &counts[1..] {
            assert!((*c as f64 - expect).abs() < 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn z_expectation_decays_as_channel() {
        let lambda = 0.3;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let trials = 100_000;
        let mut sum = 0.0;
        for _ in 0..trials {
            let mut s = StateVector::zero(1);
            apply_depolarizing(&mut s, &[0], lambda, &mut rng).unwrap();
            sum += s.expectation_pauli(&"Z".parse::<PauliString>().unwrap().into()).unwrap().re;
        }
        let mean = sum / trials as f64;
        let expect = 1.0 - 4.0 * lambda / 3.0;
        let var = 1.0 - expect * expect;
        assert!((mean - expect).abs() < 5.0 * (var / trials as f64).sqrt());
    }

    #[test]
    fn rejects_bad_arguments() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = StateVector::zero(3);
        assert!(apply_depolarizing(&mut s, &[], 0.1, &mut rng).is_err());
        assert!(apply_depolarizing(&mut s, &[0, 1, 2], 0.1, &mut rng).is_err());
        assert!(apply_depolarizing(&mut s, &[0], 1.5, &mut rng).is_err());
        assert!(NoiseModel::new(-0.1, 0.0).is_err());
    }
}
