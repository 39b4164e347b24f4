//! Stochastic Hamiltonian simulation with continuous-time probabilistic
//! angle interpolation (TE-PAI) and TETRIS, on top of a small dense
//! statevector engine.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`], [`hamiltonian`], [`models`]: Pauli algebra, Hamiltonians, H3+ and sparse SYK.
//! * [`statevector`], [`gates`], [`noise`], [`compile`]: simulation substrate.
//! * [`sampling`]: TE-PAI, adiabatic TE-PAI, TETRIS and Trotter circuits.
//! * [`estimate`]: weighted ensembles, Hadamard tests, post-selection, ZNE.
//! * [`experiments`]: ground-state fidelity, energy estimation and OTOC drivers.
//! * [`dense`]: explicit-matrix reference computations.

pub mod compile;
pub mod dense;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod gates;
pub mod hamiltonian;
pub mod models;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod sampling;
pub mod statevector;

pub use compile::{compile_to_gateset, CompiledCircuit, GateSet};
pub use error::{Error, Result};
pub use estimate::{EstimatorResult, Parity, PostSelection};
pub use gates::GateOp;
pub use hamiltonian::{PauliHamiltonian, PauliTerm};
pub use noise::NoiseModel;
pub use pauli::{Pauli, PauliString, Phase, PhasedPauli};
pub use sampling::{AdiabaticSchedule, SampledCircuit};
pub use statevector::{DiagonalHamiltonian, StateVector};
