//! Real-weighted sums of Pauli strings and their text format.
//!
//! The text format has one term per line, `<coefficient> <axes>`, with `#`
//! starting a comment. A pure-identity line contributes to the identity
//! offset; repeated strings are merged by adding coefficients.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub string: PauliString,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    n: usize,
    identity_offset: f64,
    terms: Vec<PauliTerm>,
}

impl PauliHamiltonian {
    pub fn empty(n: usize) -> Self {
        PauliHamiltonian {
            n,
            identity_offset: 0.0,
            terms: Vec::new(),
        }
    }

    /// Builds a Hamiltonian, folding identity strings into the offset and
    /// merging duplicates in order of first appearance.
    pub fn new(
        n: usize,
        identity_offset: f64,
        terms: impl IntoIterator<Item = PauliTerm>,
    ) -> Result<Self> {
        let mut h = PauliHamiltonian::empty(n);
        h.add_offset(identity_offset)?;
        for t in terms {
            h.push(t)?;
        }
        Ok(h)
    }

    fn add_offset(&mut self, c: f64) -> Result<()> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite offset {c}")));
        }
        self.identity_offset += c;
        Ok(())
    }

    fn push(&mut self, term: PauliTerm) -> Result<()> {
        if term.string.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: term.string.num_qubits(),
            });
        }
        if !term.coeff.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite coefficient for {}",
                term.string
            )));
        }
        if term.string.is_identity() {
            self.identity_offset += term.coeff;
        } else if let Some(t) = self.terms.iter_mut().find(|t| t.string == term.string) {
            t.coeff += term.coeff;
        } else {
            self.terms.push(term);
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn identity_offset(&self) -> f64 {
        self.identity_offset
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of absolute non-identity coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.string.is_diagonal())
    }

    /// Splits into the single-Z part (which also receives the identity
    /// offset) and the remainder.
    pub fn split_hf(&self) -> (PauliHamiltonian, PauliHamiltonian) {
        let mut hf = PauliHamiltonian::empty(self.n);
        let mut int = PauliHamiltonian::empty(self.n);
        hf.identity_offset = self.identity_offset;
        for t in &self.terms {
            if t.string.is_diagonal() && t.string.weight() == 1 {
                hf.terms.push(*t);
            } else {
                int.terms.push(*t);
            }
        }
        (hf, int)
    }

    /// Term-wise sum.
    pub fn plus(&self, other: &PauliHamiltonian) -> Result<PauliHamiltonian> {
        let mut h = self.clone();
        h.add_offset(other.identity_offset)?;
        for t in &other.terms {
            h.push(*t)?;
        }
        Ok(h)
    }

    /// Multiplies every coefficient (offset included) by `factor`.
    pub fn scaled(&self, factor: f64) -> PauliHamiltonian {
        PauliHamiltonian {
            n: self.n,
            identity_offset: self.identity_offset * factor,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coeff: t.coeff * factor,
                    string: t.string,
                })
                .collect(),
        }
    }

    /// Energy of a computational basis state; only valid for diagonal Hamiltonians.
    pub fn diagonal_energy(&self, bits: u64) -> Result<f64> {
        let mut e = self.identity_offset;
        for t in &self.terms {
            if !t.string.is_diagonal() {
                return Err(Error::NonDiagonal(t.string.to_string()));
            }
            let parity = (bits & t.string.z_mask()).count_ones() % 2;
            e += if parity == 0 { t.coeff } else { -t.coeff };
        }
        Ok(e)
    }

    /// Coefficient attached to `string` (the offset for the identity).
    pub fn coefficient(&self, string: &PauliString) -> Option<f64> {
        if string.is_identity() {
            return Some(self.identity_offset);
        }
        self.terms
            .iter()
            .find(|t| t.string == *string)
            .map(|t| t.coeff)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_hamiltonian(text)
    }

    pub fn serialize(&self) -> String {
        serialize_hamiltonian(self)
    }
}

pub fn l1_norm(h: &PauliHamiltonian) -> f64 {
    h.l1_norm()
}

pub fn split_hf(h: &PauliHamiltonian) -> (PauliHamiltonian, PauliHamiltonian) {
    h.split_hf()
}

pub fn parse_hamiltonian(text: &str) -> Result<PauliHamiltonian> {
    let mut n: Option<usize> = None;
    let mut offset = 0.0;
    let mut terms: Vec<PauliTerm> = Vec::new();
    let mut index: HashMap<PauliString, usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (coeff, axes) = match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(a), None) => (c, a),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected `<coefficient> <axes>`".into(),
                })
            }
        };
        let coeff: f64 = coeff.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad coefficient `{coeff}`"),
        })?;
        if !coeff.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: "coefficient must be finite".into(),
            });
        }
        let string: PauliString = axes.parse().map_err(|e: Error| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        match n {
            None => n = Some(string.num_qubits()),
            Some(m) if m != string.num_qubits() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "axis string has {} qubits, expected {m}",
                        string.num_qubits()
                    ),
                })
            }
            _ => {}
        }
        if string.is_identity() {
            offset += coeff;
        } else if let Some(&k) = index.get(&string) {
            terms[k].coeff += coeff;
        } else {
            index.insert(string, terms.len());
            terms.push(PauliTerm { coeff, string });
        }
    }

    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "no terms found".into(),
    })?;
    Ok(PauliHamiltonian {
        n,
        identity_offset: offset,
        terms,
    })
}

/// Writes the text format. Coefficients use the shortest representation
/// that parses back to the same `f64`.
pub fn serialize_hamiltonian(h: &PauliHamiltonian) -> String {
    let mut out = String::new();
    if h.identity_offset != 0.0 || h.terms.is_empty() {
        let _ = writeln!(out, "{} {}", h.identity_offset, "I".repeat(h.n));
    }
    for t in &h.terms {
        let _ = writeln!(out, "{} {}", t.coeff, t.string);
    }
    out
}
