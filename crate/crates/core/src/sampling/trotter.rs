use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::hamiltonian::PauliHamiltonian;

use super::schedule::AdiabaticSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrotterConfig {
    pub steps: usize,
}

impl TrotterConfig {
    pub fn new(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("Trotter steps must be >= 1".into()));
        }
        Ok(TrotterConfig { steps })
    }
}

fn push_step(ops: &mut Vec<GateOp>, h: &PauliHamiltonian, tau: f64, scale: f64) {
    for term in h.terms() {
        let angle = 2.0 * tau * scale * term.coeff;
        if angle != 0.0 {
            ops.push(GateOp::rotation(term.string, angle));
        }
    }
}

/// First-order product formula for `exp(-itH)`: `R` repetitions of
/// `prod_k exp(-i tau c_k P_k)` in term order. Negative `t` is allowed.
pub fn trotter_circuit(h: &PauliHamiltonian, t: f64, config: TrotterConfig) -> Vec<GateOp> {
    let tau = t / config.steps as f64;
    let mut ops = Vec::with_capacity(config.steps * h.len() + 1);
    for _ in 0..config.steps {
        push_step(&mut ops, h, tau, 1.0);
    }
    if h.identity_offset() != 0.0 && t != 0.0 {
        ops.push(GateOp::GlobalPhase {
            angle: -t * h.identity_offset(),
            control: None,
        });
    }
    ops
}

/// First-order product formula for the adiabatic path `H_HF + f(t/T) H_int`
/// with `f` held at each step's midpoint.
pub fn trotter_adiabatic(
    h_hf: &PauliHamiltonian,
    h_int: &PauliHamiltonian,
    schedule: &AdiabaticSchedule,
    config: TrotterConfig,
) -> Vec<GateOp> {
    let total = schedule.total_time();
    let r = config.steps;
    let tau = total / r as f64;
    let mut ops = Vec::with_capacity(r * (h_hf.len() + h_int.len()) + 1);
    for step in 0..r {
        let f = schedule.f((step as f64 + 0.5) / r as f64);
        push_step(&mut ops, h_hf, tau, 1.0);
        push_step(&mut ops, h_int, tau, f);
    }
    let offset = h_hf.identity_offset() + h_int.identity_offset();
    if offset != 0.0 && total != 0.0 {
        ops.push(GateOp::GlobalPhase {
            angle: -total * offset,
            control: None,
        });
    }
    ops
}
