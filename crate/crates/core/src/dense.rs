//! Dense-matrix reference computations.
//!
//! Everything here works with explicit `2^n x 2^n` matrices built from
//! Kronecker products, independent of the bit-twiddling kernels in
//! [`crate::statevector`]. It serves exact reference values (ground states,
//! exact dynamics, adiabatic fidelities, OTOCs) at desk scale.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::{Pauli, PauliString, PhasedPauli};
use crate::statevector::StateVector;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn letter_matrix(p: Pauli) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        Pauli::I => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product `P_{n-1} ⊗ ... ⊗ P_0` (qubit 0 is the least significant index bit).
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    let mut m = CMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..p.num_qubits()).rev() {
        m = m.kronecker(&letter_matrix(p.get(q)));
    }
    m
}

pub fn phased_pauli_matrix(p: &PhasedPauli) -> CMatrix {
    pauli_matrix(&p.string) * p.phase.to_complex()
}

pub fn hamiltonian_matrix(h: &PauliHamiltonian) -> CMatrix {
    let dim = 1usize << h.num_qubits();
    let mut m = CMatrix::identity(dim, dim) * c(h.identity_offset(), 0.0);
    for t in h.terms() {
        m += pauli_matrix(&t.string) * c(t.coeff, 0.0);
    }
    m
}

/// Adds a control on qubit `control` (placed above the operator's qubits)
/// to a square matrix acting on the lower qubits of an `n_total` register.
pub fn controlled(u: &CMatrix, control: usize, n_total: usize) -> CMatrix {
    let dim = 1usize << n_total;
    let sub = u.nrows();
    let mut m = CMatrix::identity(dim, dim);
    let cbit = 1usize << control;
    for r in 0..dim {
        if r & cbit == 0 {
            continue;
        }
        for col in 0..dim {
            if col & cbit == 0 || (r & !(sub - 1)) != (col & !(sub - 1)) {
                continue;
            }
            m[(r, col)] = u[(r & (sub - 1), col & (sub - 1))];
        }
    }
    m
}

/// `I_high ⊗ u`: `u` on the low qubits of a larger register.
pub fn embed_low(u: &CMatrix, n_total: usize) -> CMatrix {
    let high = (1usize << n_total) / u.nrows();
    CMatrix::identity(high, high).kronecker(u)
}

pub fn to_vector(s: &StateVector) -> CVector {
    CVector::from_column_slice(s.amplitudes())
}

pub fn to_state(v: &CVector) -> Result<StateVector> {
    StateVector::from_amplitudes(v.iter().copied().collect())
}

/// Eigenpairs of a Hermitian matrix, sorted by ascending eigenvalue.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let eig = m.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_columns(
            &order
                .iter()
                .map(|&k| eig.eigenvectors.column(k).into_owned())
                .collect::<Vec<_>>(),
        );
        HermitianEigen { values, vectors }
    }

    /// `exp(-i t M)`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        let phases = CMatrix::from_diagonal(&CVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&e| Complex64::from_polar(1.0, -t * e)),
        ));
        &self.vectors * phases * self.vectors.adjoint()
    }
}

/// `exp(-i t H)` by eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    HermitianEigen::new(h).evolution(t)
}

/// Lowest eigenpair of `h` restricted to basis states with `ones` bits set.
pub fn sector_ground_state(h: &PauliHamiltonian, ones: u32) -> Result<(f64, StateVector)> {
    let m = hamiltonian_matrix(h);
    let dim = m.nrows();
    let idx: Vec<usize> = (0..dim).filter(|b| b.count_ones() == ones).collect();
    if idx.is_empty() {
        return Err(Error::InvalidParameter(format!("empty sector with {ones} ones")));
    }
    let sub = CMatrix::from_fn(idx.len(), idx.len(), |r, col| m[(idx[r], idx[col])]);
    let eig = HermitianEigen::new(&sub);
    let mut amps = vec![c(0.0, 0.0); dim];
    for (r, &b) in idx.iter().enumerate() {
        amps[b] = eig.vectors[(r, 0)];
    }
    Ok((eig.values[0], StateVector::from_amplitudes(amps)?))
}

/// Lowest eigenpair over the full Hilbert space.
pub fn ground_state(h: &PauliHamiltonian) -> Result<(f64, StateVector)> {
    let eig = HermitianEigen::new(&hamiltonian_matrix(h));
    let v = eig.vectors.column(0).into_owned();
    Ok((eig.values[0], to_state(&v)?))
}

/// Integrates `i d/dt psi = (H_0 + f(t/T) H_1) psi` on `[0, T]` with
/// classical RK4 and `steps` uniform steps.
pub fn adiabatic_evolve(
    h0: &CMatrix,
    h1: &CMatrix,
    f: impl Fn(f64) -> f64,
    total_time: f64,
    psi0: &CVector,
    steps: usize,
) -> CVector {
    let dt = total_time / steps as f64;
    let mi = c(0.0, -1.0);
    let deriv = |t: f64, v: &CVector| -> CVector {
        let s = if total_time > 0.0 { t / total_time } else { 0.0 };
        (h0 * v + h1 * v * c(f(s), 0.0)) * mi
    };
    let mut psi = psi0.clone();
    for k in 0..steps {
        let t = k as f64 * dt;
        let k1 = deriv(t, &psi);
        let k2 = deriv(t + dt / 2.0, &(&psi + &k1 * c(dt / 2.0, 0.0)));
        let k3 = deriv(t + dt / 2.0, &(&psi + &k2 * c(dt / 2.0, 0.0)));
        let k4 = deriv(t + dt, &(&psi + &k3 * c(dt, 0.0)));
        psi += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
    }
    psi
}

/// `<0..0| gamma_j(t) gamma_i gamma_j(t) gamma_i |0..0>` with
/// `gamma(t) = e^{iHt} gamma e^{-iHt}`.
pub fn otoc(h: &PauliHamiltonian, gi: &PauliString, gj: &PauliString, t: f64) -> Complex64 {
    let eig = HermitianEigen::new(&hamiltonian_matrix(h));
    otoc_with(&eig, gi, gj, t)
}

pub fn otoc_with(eig: &HermitianEigen, gi: &PauliString, gj: &PauliString, t: f64) -> Complex64 {
    let u = eig.evolution(t);
    let ud = u.adjoint();
    let mi = pauli_matrix(gi);
    let mj = pauli_matrix(gj);
    let dim = u.nrows();
    let mut v = CVector::zeros(dim);
    v[0] = c(1.0, 0.0);
    let zero = v.clone();
    for m in [&mi, &u, &mj, &ud, &mi, &u, &mj, &ud] {
        v = m * v;
    }
    zero.dotc(&v)
}
