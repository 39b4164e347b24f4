//! End-to-end drivers: adiabatic ground-state fidelity, Hadamard-test
//! energy estimation and interferometric OTOCs.

mod energy;
mod fidelity;
mod otoc;
mod problem;

pub use energy::{
    energy_circuits, energy_from_overlap, energy_from_overlaps, estimate_ground_energy,
    exact_energy_estimate, trotter_energy, EnergyEstimate, EnergyEstimationConfig,
};
pub use fidelity::{
    adiabatic_fidelity, adiabatic_fidelity_ensemble, exact_adiabatic_fidelity, fidelity_circuits,
    trotter_fidelity, FidelityConfig, TrotterPoint,
};
pub use otoc::{otoc_circuit, otoc_circuits, otoc_point, otoc_series, OtocConfig, OtocPoint};
pub use problem::AdiabaticProblem;
