//! Gate operations understood by the statevector engine.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PhasedPauli};
use crate::statevector::{DiagonalHamiltonian, StateVector};

#[derive(Clone, Debug)]
pub enum GateOp {
    /// `exp(-i angle/2 P)`.
    PauliRotation {
        pauli: PauliString,
        angle: f64,
        control: Option<usize>,
    },
    /// `phase * P`.
    Pauli {
        pauli: PhasedPauli,
        control: Option<usize>,
    },
    /// `exp(-i duration H)` for a diagonal `H`.
    DiagonalEvolution {
        hamiltonian: Arc<DiagonalHamiltonian>,
        duration: f64,
        control: Option<usize>,
    },
    /// `exp(i angle)`; controlled, this is a phase gate on the control qubit.
    GlobalPhase { angle: f64, control: Option<usize> },
    Hadamard(usize),
    S(usize),
    Sdg(usize),
    /// `exp(-i angle/2 Z)`.
    Rz { qubit: usize, angle: f64 },
    Cx { control: usize, target: usize },
    /// `exp(-i angle/2 ZZ)`.
    Rzz { a: usize, b: usize, angle: f64 },
}

impl GateOp {
    pub fn rotation(pauli: PauliString, angle: f64) -> Self {
        GateOp::PauliRotation {
            pauli,
            angle,
            control: None,
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match self {
            GateOp::PauliRotation {
                pauli,
                angle,
                control,
            } => state.apply_pauli_rotation(pauli, *angle, *control),
            GateOp::Pauli { pauli, control } => state.apply_pauli(pauli, *control),
            GateOp::DiagonalEvolution {
                hamiltonian,
                duration,
                control,
            } => state.apply_diagonal_evolution(hamiltonian, *duration, *control),
            GateOp::GlobalPhase { angle, control } => state.apply_global_phase(*angle, *control),
            GateOp::Hadamard(q) => state.apply_hadamard(*q),
            GateOp::S(q) => state.apply_s(*q),
            GateOp::Sdg(q) => state.apply_sdg(*q),
            GateOp::Rz { qubit, angle } => state.apply_rz(*qubit, *angle),
            GateOp::Cx { control, target } => state.apply_cx(*control, *target),
            GateOp::Rzz { a, b, angle } => state.apply_rzz(*a, *b, *angle),
        }
    }

    pub fn adjoint(&self) -> GateOp {
        match self {
            GateOp::PauliRotation {
                pauli,
                angle,
                control,
            } => GateOp::PauliRotation {
                pauli: *pauli,
                angle: -angle,
                control: *control,
            },
            GateOp::Pauli { pauli, control } => GateOp::Pauli {
                pauli: pauli.adjoint(),
                control: *control,
            },
            GateOp::DiagonalEvolution {
                hamiltonian,
                duration,
                control,
            } => GateOp::DiagonalEvolution {
                hamiltonian: Arc::clone(hamiltonian),
                duration: -duration,
                control: *control,
            },
            GateOp::GlobalPhase { angle, control } => GateOp::GlobalPhase {
                angle: -angle,
                control: *control,
            },
            GateOp::Hadamard(q) => GateOp::Hadamard(*q),
            GateOp::S(q) => GateOp::Sdg(*q),
            GateOp::Sdg(q) => GateOp::S(*q),
            GateOp::Rz { qubit, angle } => GateOp::Rz {
                qubit: *qubit,
                angle: -angle,
            },
            GateOp::Cx { control, target } => GateOp::Cx {
                control: *control,
                target: *target,
            },
            GateOp::Rzz { a, b, angle } => GateOp::Rzz {
                a: *a,
                b: *b,
                angle: -angle,
            },
        }
    }

    /// Adds a control qubit to a high-level operation.
    pub fn controlled(&self, c: usize) -> Result<GateOp> {
        let already = |existing: &Option<usize>| -> Result<()> {
            if existing.is_some() {
                Err(Error::InvalidParameter("operation is already controlled".into()))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            GateOp::PauliRotation {
                pauli,
                angle,
                control,
            } => {
                already(control)?;
                GateOp::PauliRotation {
                    pauli: *pauli,
                    angle: *angle,
                    control: Some(c),
                }
            }
            GateOp::Pauli { pauli, control } => {
                already(control)?;
                GateOp::Pauli {
                    pauli: *pauli,
                    control: Some(c),
                }
            }
            GateOp::DiagonalEvolution {
                hamiltonian,
                duration,
                control,
            } => {
                already(control)?;
                GateOp::DiagonalEvolution {
                    hamiltonian: Arc::clone(hamiltonian),
                    duration: *duration,
                    control: Some(c),
                }
            }
            GateOp::GlobalPhase { angle, control } => {
                already(control)?;
                GateOp::GlobalPhase {
                    angle: *angle,
                    control: Some(c),
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "primitive gates cannot be controlled".into(),
                ))
            }
        })
    }

    /// Qubits touched by a primitive gate, for noise insertion. High-level
    /// operations and uncontrolled global phases report none.
    pub fn primitive_qubits(&self) -> Option<Vec<usize>> {
        match self {
            GateOp::Hadamard(q) | GateOp::S(q) | GateOp::Sdg(q) => Some(vec![*q]),
            GateOp::Rz { qubit, .. } => Some(vec![*qubit]),
            GateOp::Cx { control, target } => Some(vec![*control, *target]),
            GateOp::Rzz { a, b, .. } => Some(vec![*a, *b]),
            GateOp::GlobalPhase {
                control: Some(c), ..
            } => Some(vec![*c]),
            GateOp::GlobalPhase { control: None, .. } => Some(vec![]),
            GateOp::Pauli {
                pauli,
                control: None,
            } if pauli.string.weight() == 1 => Some(pauli.string.support().collect()),
            _ => None,
        }
    }

    pub fn record(&self) -> GateRecord {
        let (kind, qubits, angle, control, pauli) = match self {
            GateOp::PauliRotation {
                pauli,
                angle,
                control,
            } => (
                "pauli_rotation",
                pauli.support().collect(),
                Some(*angle),
                *control,
                Some(pauli.to_string()),
            ),
            GateOp::Pauli { pauli, control } => (
                "pauli",
                pauli.string.support().collect(),
                None,
                *control,
                Some(pauli.to_string()),
            ),
            GateOp::DiagonalEvolution {
                hamiltonian,
                duration,
                control,
            } => (
                "diagonal_evolution",
                (0..hamiltonian.num_qubits()).collect(),
                Some(*duration),
                *control,
                None,
            ),
            GateOp::GlobalPhase { angle, control } => {
                ("global_phase", vec![], Some(*angle), *control, None)
            }
            GateOp::Hadamard(q) => ("h", vec![*q], None, None, None),
            GateOp::S(q) => ("s", vec![*q], None, None, None),
            GateOp::Sdg(q) => ("sdg", vec![*q], None, None, None),
            GateOp::Rz { qubit, angle } => ("rz", vec![*qubit], Some(*angle), None, None),
            GateOp::Cx { control, target } => ("cx", vec![*control, *target], None, None, None),
            GateOp::Rzz { a, b, angle } => ("rzz", vec![*a, *b], Some(*angle), None, None),
        };
        GateRecord {
            kind: kind.to_string(),
            qubits,
            angle,
            control,
            pauli,
        }
    }
}

/// One line of a circuit dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    pub qubits: Vec<usize>,
    pub angle: Option<f64>,
    pub control: Option<usize>,
    pub pauli: Option<String>,
}

pub fn dump_gates(ops: &[GateOp]) -> Vec<GateRecord> {
    ops.iter().map(GateOp::record).collect()
}

pub fn adjoint_sequence(ops: &[GateOp]) -> Vec<GateOp> {
    ops.iter().rev().map(GateOp::adjoint).collect()
}

pub fn apply_all(state: &mut StateVector, ops: &[GateOp]) -> Result<()> {
    ops.iter().try_for_each(|g| g.apply(state))
}
