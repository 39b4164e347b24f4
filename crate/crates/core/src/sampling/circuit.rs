use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gates::GateOp;
use crate::hamiltonian::PauliHamiltonian;
use crate::statevector::DiagonalHamiltonian;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    /// `exp(-i sgn(c) delta/2 P)`.
    Interp,
    /// `exp(-i pi/2 P) = -i P`.
    Pi,
    /// `exp(+i sgn(a) delta P)`.
    TetrisGate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateEvent {
    pub time: f64,
    pub term_index: usize,
    pub kind: EventKind,
}

/// Whether a circuit realises a channel `e^{-itH} . e^{itH}` or the operator `e^{+isH}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CircuitMode {
    Channel,
    Operator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Adjoint,
}

/// One randomly sampled circuit together with its importance weight.
#[derive(Clone, Debug)]
pub struct SampledCircuit {
    pub mode: CircuitMode,
    pub duration: f64,
    pub delta: f64,
    pub events: Vec<GateEvent>,
    pub sign: f64,
    pub normalization: f64,
    /// Terms the events index into.
    pub terms: Arc<PauliHamiltonian>,
    /// Exactly simulated diagonal part, interleaved between events.
    pub diagonal: Option<Arc<DiagonalHamiltonian>>,
}

impl SampledCircuit {
    pub fn weight(&self) -> f64 {
        self.sign * self.normalization
    }

    pub fn num_qubits(&self) -> usize {
        self.terms.num_qubits()
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// Rotation angle `theta` (in `exp(-i theta/2 P)`) of an event.
    pub fn event_angle(&self, e: &GateEvent) -> f64 {
        let c = self.terms.terms()[e.term_index].coeff;
        let sgn = if c < 0.0 { -1.0 } else { 1.0 };
        match e.kind {
            EventKind::Interp => sgn * self.delta,
            EventKind::Pi => PI,
            EventKind::TetrisGate => -2.0 * sgn * self.delta,
        }
    }

    pub(crate) fn sort_events(&mut self) {
        self.events.sort_by(|a, b| {
            a.time
                .total_cmp(&b.time)
                .then(a.term_index.cmp(&b.term_index))
                .then(a.kind.cmp(&b.kind))
        });
    }

    pub fn to_gateops(&self, direction: Direction, control: Option<usize>) -> Result<Vec<GateOp>> {
        circuit_to_gateops(self, direction, control)
    }

    pub fn record(&self) -> CircuitRecord {
        CircuitRecord {
            mode: self.mode,
            duration: self.duration,
            delta: self.delta,
            sign: self.sign,
            normalization: self.normalization,
            events: self
                .events
                .iter()
                .map(|e| EventRecord {
                    time: e.time,
                    term_index: e.term_index,
                    kind: e.kind,
                    pauli: self.terms.terms()[e.term_index].string.to_string(),
                    angle: self.event_angle(e),
                })
                .collect(),
        }
    }
}

/// JSON form of a sampled circuit, for audit and replay.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitRecord {
    pub mode: CircuitMode,
    pub duration: f64,
    pub delta: f64,
    pub sign: f64,
    pub normalization: f64,
    pub events: Vec<EventRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub time: f64,
    pub term_index: usize,
    pub kind: EventKind,
    pub pauli: String,
    /// `theta` in `exp(-i theta/2 P)`.
    pub angle: f64,
}

/// Lowers a sampled circuit to gate operations. Diagonal segments sit
/// between events and after the last one; a whole-Hamiltonian identity
/// offset becomes a (controllable) phase.
pub fn circuit_to_gateops(
    c: &SampledCircuit,
    direction: Direction,
    control: Option<usize>,
) -> Result<Vec<GateOp>> {
    // Channel circuits evolve with exp(-i dt H_HF); operator circuits with exp(+i dt H_HF).
    let time_sign = match c.mode {
        CircuitMode::Channel => 1.0,
        CircuitMode::Operator => -1.0,
    };
    let mut ops = Vec::with_capacity(2 * c.events.len() + 2);
    let segment = |ops: &mut Vec<GateOp>, from: f64, to: f64| {
        if let Some(d) = &c.diagonal {
            let dt = to - from;
            if dt != 0.0 {
                ops.push(GateOp::DiagonalEvolution {
                    hamiltonian: Arc::clone(d),
                    duration: time_sign * dt,
                    control: None,
                });
            }
        }
    };
    let mut last = 0.0;
    for e in &c.events {
        segment(&mut ops, last, e.time);
        last = e.time;
        ops.push(GateOp::rotation(
            c.terms.terms()[e.term_index].string,
            c.event_angle(e),
        ));
    }
    segment(&mut ops, last, c.duration);
    let offset = c.terms.identity_offset();
    if offset != 0.0 && c.duration != 0.0 {
        ops.push(GateOp::GlobalPhase {
            angle: -time_sign * c.duration * offset,
            control: None,
        });
    }
    if direction == Direction::Adjoint {
        ops = ops.iter().rev().map(GateOp::adjoint).collect();
    }
    match control {
        Some(q) => ops.iter().map(|op| op.controlled(q)).collect(),
        None => Ok(ops),
    }
}
