use crate::dense::{hamiltonian_matrix, sector_ground_state, to_vector};
use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::models::{build_h3plus, H3PLUS_HF_BITS};
use crate::statevector::StateVector;

/// Molecular Hamiltonian prepared from a product reference state, with its
/// reference ground state in the same particle-number sector.
#[derive(Clone, Debug)]
pub struct AdiabaticProblem {
    pub hamiltonian: PauliHamiltonian,
    /// Identity offset plus single-Z terms.
    pub h_hf: PauliHamiltonian,
    pub h_int: PauliHamiltonian,
    pub hf_bits: u64,
    pub hf_state: StateVector,
    /// `<HF|H|HF>`, identity offset included.
    pub e_hf: f64,
    pub e_exact: f64,
    pub ground_state: StateVector,
}

impl AdiabaticProblem {
    /// `hf_bits` must be an eigenstate of the diagonal part; the ground
    /// state is taken in its sector (same number of set bits), which the
    /// charge-conserving Hamiltonian cannot leave.
    pub fn new(hamiltonian: PauliHamiltonian, hf_bits: u64) -> Result<Self> {
        let n = hamiltonian.num_qubits();
        if n > 14 {
            return Err(Error::TooManyQubits(n));
        }
        let (h_hf, h_int) = hamiltonian.split_hf();
        let hf_state = StateVector::basis(n, hf_bits);
        let e_hf = hamiltonian
            .terms()
            .iter()
            .filter(|t| t.string.is_diagonal())
            .map(|t| t.coeff * if (t.string.z_mask() & hf_bits).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .sum::<f64>()
            + hamiltonian.identity_offset();
        let (e_exact, ground_state) = sector_ground_state(&hamiltonian, hf_bits.count_ones())?;
        Ok(AdiabaticProblem {
            hamiltonian,
            h_hf,
            h_int,
            hf_bits,
            hf_state,
            e_hf,
            e_exact,
            ground_state,
        })
    }

    pub fn h3plus() -> Result<Self> {
        Self::new(build_h3plus(), H3PLUS_HF_BITS)
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    /// Exact `<HF|H|HF>` from the dense matrix, for cross-checking `e_hf`.
    pub fn dense_hf_energy(&self) -> f64 {
        let m = hamiltonian_matrix(&self.hamiltonian);
        let v = to_vector(&self.hf_state);
        v.dotc(&(&m * &v)).re
    }
}
