//! Concrete Hamiltonians: the tabulated H3+ molecule and sparse SYK instances.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{parse_hamiltonian, PauliHamiltonian, PauliTerm};
use crate::pauli::{majorana_operator, PhasedPauli};
use crate::rng;

/// The H3+ Hamiltonian file shipped with the crate.
pub const H3PLUS_TEXT: &str = include_str!("../data/h3plus.ham");

/// Hartree-Fock reference |110000>: qubits 0 and 1 occupied.
pub const H3PLUS_HF_BITS: u64 = 0b000011;

pub fn build_h3plus() -> PauliHamiltonian {
    parse_hamiltonian(H3PLUS_TEXT).expect("bundled H3+ data parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SykParams {
    /// Number of Majorana modes (even, at least 8).
    pub n_majorana: usize,
    /// Sparsity: expected number of couplings per Majorana.
    pub k: f64,
    /// Coupling scale.
    #[serde(default = "default_j")]
    pub j: f64,
    pub seed: u64,
}

fn default_j() -> f64 {
    1.0
}

impl SykParams {
    pub fn new(n_majorana: usize, k: f64, seed: u64) -> Self {
        SykParams {
            n_majorana,
            k,
            j: 1.0,
            seed,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_majorana / 2
    }

    /// Inclusion probability `p = kN / C(N, 4)`.
    pub fn probability(&self) -> f64 {
        let n = self.n_majorana as f64;
        self.k * n / binomial4(self.n_majorana)
    }

    /// Coupling variance `3! J^2 / (p N^3)`.
    pub fn coupling_variance(&self) -> f64 {
        let n = self.n_majorana as f64;
        6.0 * self.j * self.j / (self.probability() * n.powi(3))
    }

    pub fn expected_terms(&self) -> f64 {
        self.probability() * binomial4(self.n_majorana)
    }

    fn validate(&self) -> Result<()> {
        if self.n_majorana % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "Majorana count must be even, got {}",
                self.n_majorana
            )));
        }
        if self.n_majorana < 8 {
            return Err(Error::InvalidParameter(format!(
                "Majorana count must be at least 8, got {}",
                self.n_majorana
            )));
        }
        if !(self.k > 0.0) || !self.j.is_finite() {
            return Err(Error::InvalidParameter("k must be positive and J finite".into()));
        }
        let p = self.probability();
        if p > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "inclusion probability {p} exceeds 1"
            )));
        }
        Ok(())
    }
}

fn binomial4(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) * (n - 3.0) / 24.0
}

/// A kept 4-body coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SykCoupling {
    pub modes: [usize; 4],
    pub value: f64,
}

/// Draws the couplings. Tuples are visited in lexicographic order with one
/// uniform (inclusion) draw followed by one Gaussian draw per tuple.
pub fn sample_syk_couplings(params: &SykParams) -> Result<Vec<SykCoupling>> {
    params.validate()?;
    let p = params.probability();
    let normal = Normal::new(0.0, params.coupling_variance().sqrt())
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = rng::stream(params.seed, &[0x5359_4b]);
    let n = params.n_majorana;
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let keep = rng.random::<f64>() < p;
                    let value = normal.sample(&mut rng);
                    if keep {
                        out.push(SykCoupling {
                            modes: [a, b, c, d],
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Product of four Majorana operators as a phased Pauli string.
pub fn majorana_product(modes: [usize; 4], n_qubits: usize) -> Result<PhasedPauli> {
    let mut acc = PhasedPauli::from(majorana_operator(modes[0], n_qubits)?);
    for &m in &modes[1..] {
        acc = acc.mul(&PhasedPauli::from(majorana_operator(m, n_qubits)?))?;
    }
    Ok(acc)
}

pub fn generate_sparse_syk(params: &SykParams) -> Result<PauliHamiltonian> {
    let n_qubits = params.n_qubits();
    let couplings = sample_syk_couplings(params)?;
    let mut terms = Vec::with_capacity(couplings.len());
    for c in couplings {
        let prod = majorana_product(c.modes, n_qubits)?;
        let sign = prod.phase.real_sign().ok_or_else(|| {
            Error::InvalidParameter(format!("non-Hermitian Majorana product {prod}"))
        })?;
        terms.push(PauliTerm {
            coeff: sign * c.value,
            string: prod.string,
        });
    }
    PauliHamiltonian::new(n_qubits, 0.0, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn h3plus_shape() {
        let h = build_h3plus();
        assert_eq!(h.num_qubits(), 6);
        assert_eq!(h.len(), 41);
        assert_eq!(h.identity_offset(), -2.77);
        let z5: PauliString = "IIIIIZ".parse().unwrap();
        assert_eq!(h.coefficient(&z5), Some(5.81e-1));
    }

    #[test]
    fn h3plus_split() {
        let h = build_h3plus();
        let (hf, int) = h.split_hf();
        assert_eq!(hf.len(), 6);
        assert_eq!(int.len(), 35);
        assert_eq!(hf.identity_offset(), -2.77);
        assert_eq!(int.identity_offset(), 0.0);
        assert_eq!(hf.plus(&int).unwrap().l1_norm(), h.l1_norm());
    }

    #[test]
    fn syk_rejects_bad_parameters() {
        assert!(generate_sparse_syk(&SykParams::new(9, 2.0, 0)).is_err());
        assert!(generate_sparse_syk(&SykParams::new(6, 1.0, 0)).is_err());
        // p = 8k/70 > 1 for k = 10
        assert!(generate_sparse_syk(&SykParams::new(8, 10.0, 0)).is_err());
    }

    #[test]
    fn syk_is_seed_deterministic() {
        let p = SykParams::new(12, 2.3, 42);
        assert_eq!(generate_sparse_syk(&p).unwrap(), generate_sparse_syk(&p).unwrap());
        let q = SykParams::new(12, 2.3, 43);
        assert_ne!(generate_sparse_syk(&p).unwrap(), generate_sparse_syk(&q).unwrap());
    }

    #[test]
    fn syk_terms_have_even_flip_weight() {
        for seed in 0..20 {
            let h = generate_sparse_syk(&SykParams::new(14, 2.3, seed)).unwrap();
            for t in h.terms() {
                assert_eq!(t.string.flip_weight() % 2, 0, "{}", t.string);
                let parity = PauliString::from_masks(7, 0, (1 << 7) - 1).unwrap();
                assert!(t.string.commutes(&parity).unwrap());
            }
        }
    }

    #[test]
    fn expected_term_count_n18() {
        let p = SykParams::new(18, 2.3, 0);
        assert!((p.expected_terms() - 41.4).abs() < 1e-9);
    }
}
