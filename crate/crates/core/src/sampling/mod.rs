//! Randomised circuit samplers and the deterministic Trotter baseline.

mod circuit;
mod formulas;
mod schedule;
mod tepai;
mod tetris;
mod trotter;

pub use circuit::{
    circuit_to_gateops, CircuitMode, CircuitRecord, Direction, EventKind, EventRecord, GateEvent,
    SampledCircuit,
};
pub use formulas::{gamma_coefficients, n_gates, n_sample, n_tetris, validate_delta, DELTA_GUARD};
pub use schedule::AdiabaticSchedule;
pub use tepai::{sample_adiabatic_tepai, sample_tepai, TepaiSampler};
pub use tetris::{sample_tetris, TetrisSampler};
pub use trotter::{trotter_adiabatic, trotter_circuit, TrotterConfig};
