//! Lowering of high-level gate operations to one- and two-qubit primitives.
//!
//! A weight-`w` rotation becomes basis changes, a CX parity ladder and a
//! single `Rz`. In the CX gateset that costs `2(w-1)` CX. In the R_ZZ
//! gateset the last ladder rung is absorbed into one `Rzz` and each remaining
//! CX is realised by a `Rzz(-pi/2)`, giving `2w-3` R_ZZ for `w >= 2`.
//! Controlled rotations carry the full ladder plus a controlled `Rz`.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::noise::{apply_depolarizing, NoiseModel};
use crate::pauli::{Pauli, PauliString, PhasedPauli};
use crate::statevector::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GateSet {
    #[default]
    Cx,
    Rzz,
}

impl GateSet {
    /// Tag written into run metadata.
    pub fn cost_model_tag(self) -> &'static str {
        match self {
            GateSet::Cx => "cx-ladder",
            GateSet::Rzz => "rzz-ladder",
        }
    }

    /// Two-qubit gates emitted for an uncontrolled weight-`w` rotation.
    pub fn rotation_cost(self, w: usize) -> usize {
        match (self, w) {
            (_, 0 | 1) => 0,
            (GateSet::Cx, w) => 2 * (w - 1),
            (GateSet::Rzz, w) => 2 * w - 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    pub n_qubits: usize,
    pub gateset: GateSet,
    pub gates: Vec<GateOp>,
    pub n_1q: usize,
    pub n_cx: usize,
    pub n_rzz: usize,
}

impl CompiledCircuit {
    pub fn two_qubit_count(&self) -> usize {
        self.n_cx + self.n_rzz
    }
}

struct Emitter {
    n: usize,
    gateset: GateSet,
    out: Vec<GateOp>,
}

impl Emitter {
    fn push(&mut self, g: GateOp) {
        self.out.push(g);
    }

    fn cx(&mut self, c: usize, t: usize) {
        match self.gateset {
            GateSet::Cx => self.push(GateOp::Cx {
                control: c,
                target: t,
            }),
            GateSet::Rzz => {
                self.push(GateOp::Hadamard(t));
                self.cz(c, t);
                self.push(GateOp::Hadamard(t));
            }
        }
    }

    // CZ = e^{i pi/4} Rz_c(pi/2) Rz_t(pi/2) Rzz(-pi/2)
    fn cz(&mut self, c: usize, t: usize) {
        match self.gateset {
            GateSet::Cx => {
                self.push(GateOp::Hadamard(t));
                self.cx(c, t);
                self.push(GateOp::Hadamard(t));
            }
            GateSet::Rzz => {
                self.push(GateOp::GlobalPhase {
                    angle: FRAC_PI_4,
                    control: None,
                });
                self.push(GateOp::Rz {
                    qubit: c,
                    angle: FRAC_PI_2,
                });
                self.push(GateOp::Rz {
                    qubit: t,
                    angle: FRAC_PI_2,
                });
                self.push(GateOp::Rzz {
                    a: c,
                    b: t,
                    angle: -FRAC_PI_2,
                });
            }
        }
    }

    // controlled-Rz(theta) on target t
    fn crz(&mut self, c: usize, t: usize, theta: f64) {
        match self.gateset {
            GateSet::Cx => {
                self.push(GateOp::Rz {
                    qubit: t,
                    angle: theta / 2.0,
                });
                self.cx(c, t);
                self.push(GateOp::Rz {
                    qubit: t,
                    angle: -theta / 2.0,
                });
                self.cx(c, t);
            }
            GateSet::Rzz => {
                self.push(GateOp::Rz {
                    qubit: t,
                    angle: theta / 2.0,
                });
                self.push(GateOp::Rzz {
                    a: c,
                    b: t,
                    angle: -theta / 2.0,
                });
            }
        }
    }

    fn basis_in(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::X => self.push(GateOp::Hadamard(q)),
            Pauli::Y => {
                self.push(GateOp::Sdg(q));
                self.push(GateOp::Hadamard(q));
            }
            _ => {}
        }
    }

    fn basis_out(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::X => self.push(GateOp::Hadamard(q)),
            Pauli::Y => {
                self.push(GateOp::Hadamard(q));
                self.push(GateOp::S(q));
            }
            _ => {}
        }
    }

    fn rotation(&mut self, p: &PauliString, theta: f64, control: Option<usize>) {
        let support: Vec<usize> = p.support().collect();
        let w = support.len();
        for &q in &support {
            self.basis_in(q, p.get(q));
        }
        let last = support[w - 1];
        let absorb_last_rung = self.gateset == GateSet::Rzz && control.is_none() && w >= 2;
        let rungs = if absorb_last_rung { w - 2 } else { w - 1 };
        for i in 0..rungs {
            self.cx(support[i], support[i + 1]);
        }
        match control {
            Some(c) => self.crz(c, last, theta),
            None if absorb_last_rung => self.push(GateOp::Rzz {
                a: support[w - 2],
                b: last,
                angle: theta,
            }),
            None => self.push(GateOp::Rz {
                qubit: last,
                angle: theta,
            }),
        }
        for i in (0..rungs).rev() {
            self.cx(support[i], support[i + 1]);
        }
        for &q in &support {
            self.basis_out(q, p.get(q));
        }
    }

    fn pauli(&mut self, p: &PhasedPauli, control: Option<usize>) -> Result<()> {
        let phase = p.phase.quarter_turns() as f64 * FRAC_PI_2;
        match control {
            None => {
                for q in p.string.support() {
                    let single = PauliString::single(self.n, q, p.string.get(q))?;
                    self.push(GateOp::Pauli {
                        pauli: single.into(),
                        control: None,
                    });
                }
                if phase != 0.0 {
                    self.push(GateOp::GlobalPhase {
                        angle: phase,
                        control: None,
                    });
                }
            }
            Some(c) => {
                for q in p.string.support() {
                    match p.string.get(q) {
                        Pauli::X => self.cx(c, q),
                        Pauli::Y => {
                            self.push(GateOp::Sdg(q));
                            self.cx(c, q);
                            self.push(GateOp::S(q));
                        }
                        Pauli::Z => self.cz(c, q),
                        Pauli::I => {}
                    }
                }
                if phase != 0.0 {
                    self.push(GateOp::GlobalPhase {
                        angle: phase,
                        control: Some(c),
                    });
                }
            }
        }
        Ok(())
    }

    fn lower(&mut self, op: &GateOp) -> Result<()> {
        match op {
            GateOp::PauliRotation {
                pauli,
                angle,
                control,
            } => {
                if pauli.is_identity() {
                    return Err(Error::IdentityRotation);
                }
                self.rotation(pauli, *angle, *control);
            }
            GateOp::Pauli { pauli, control } => self.pauli(pauli, *control)?,
            GateOp::DiagonalEvolution {
                hamiltonian,
                duration,
                control,
            } => {
                let h = hamiltonian.hamiltonian();
                for t in h.terms() {
                    self.rotation(&t.string, 2.0 * duration * t.coeff, *control);
                }
                if h.identity_offset() != 0.0 {
                    self.push(GateOp::GlobalPhase {
                        angle: -duration * h.identity_offset(),
                        control: *control,
                    });
                }
            }
            other => self.push(other.clone()),
        }
        Ok(())
    }
}

/// Lowers `ops` to primitives of `gateset` and tallies them.
pub fn compile_to_gateset(ops: &[GateOp], n_qubits: usize, gateset: GateSet) -> Result<CompiledCircuit> {
    let mut e = Emitter {
        n: n_qubits,
        gateset,
        out: Vec::with_capacity(ops.len() * 8),
    };
    for op in ops {
        e.lower(op)?;
    }
    let mut c = CompiledCircuit {
        n_qubits,
        gateset,
        gates: e.out,
        n_1q: 0,
        n_cx: 0,
        n_rzz: 0,
    };
    for g in &c.gates {
        match g {
            GateOp::Cx { .. } => c.n_cx += 1,
            GateOp::Rzz { .. } => c.n_rzz += 1,
            GateOp::GlobalPhase { control: None, .. } => {}
            _ => c.n_1q += 1,
        }
    }
    Ok(c)
}

/// Two-qubit gate count of `ops` after lowering.
pub fn two_qubit_cost(ops: &[GateOp], n_qubits: usize, gateset: GateSet) -> Result<usize> {
    Ok(compile_to_gateset(ops, n_qubits, gateset)?.two_qubit_count())
}

/// Applies `ops` in order without noise.
pub fn run_circuit(state: &mut StateVector, ops: &[GateOp]) -> Result<()> {
    crate::gates::apply_all(state, ops)
}

/// Applies a compiled circuit with one depolarizing trajectory step after
/// every primitive gate.
pub fn run_noisy<R: Rng + ?Sized>(
    state: &mut StateVector,
    circuit: &CompiledCircuit,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<()> {
    for g in &circuit.gates {
        g.apply(state)?;
        if !noise.is_active() {
            continue;
        }
        let qubits = g.primitive_qubits().ok_or_else(|| {
            Error::InvalidParameter("noisy execution needs a compiled circuit".into())
        })?;
        let lambda = noise.probability_for(qubits.len());
        if lambda > 0.0 {
            apply_depolarizing(state, &qubits, lambda, rng)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_one_has_no_two_qubit_gates() {
        for gs in [GateSet::Cx, GateSet::Rzz] {
            let c = compile_to_gateset(&[GateOp::rotation("IXI".parse().unwrap(), 0.3)], 3, gs)
                .unwrap();
            assert_eq!(c.two_qubit_count(), 0);
        }
    }

    #[test]
    fn weight_two_is_one_native_rzz() {
        let c = compile_to_gateset(&[GateOp::rotation("XY".parse().unwrap(), 0.3)], 2, GateSet::Rzz)
            .unwrap();
        assert_eq!(c.n_rzz, 1);
        assert_eq!(c.n_cx, 0);
    }

    #[test]
    fn ladder_costs() {
        let p: PauliString = "XYZZX".parse().unwrap();
        let cx = compile_to_gateset(&[GateOp::rotation(p, 0.3)], 5, GateSet::Cx).unwrap();
        assert_eq!(cx.n_cx, 2 * 4);
        assert_eq!(GateSet::Cx.rotation_cost(5), 8);
        let rzz = compile_to_gateset(&[GateOp::rotation(p, 0.3)], 5, GateSet::Rzz).unwrap();
        assert_eq!(rzz.n_rzz, 2 * 5 - 3);
        assert_eq!(GateSet::Rzz.rotation_cost(5), 7);
    }

    #[test]
    fn counters_match_tallies() {
        let ops = [
            GateOp::rotation("XYZ".parse().unwrap(), 0.2),
            GateOp::PauliRotation {
                pauli: "ZZI".parse().unwrap(),
                angle: 0.4,
                control: Some(3),
            },
        ];
        let c = compile_to_gateset(&ops, 4, GateSet::Cx).unwrap();
        let cx = c.gates.iter().filter(|g| matches!(g, GateOp::Cx { .. })).count();
        assert_eq!(cx, c.n_cx);
        assert_eq!(c.n_cx, 4 + 4);
    }
}
