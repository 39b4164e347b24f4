//! Pauli strings in packed symplectic form.
//!
//! A string on `n <= 64` qubits is stored as two bit masks: bit `q` of `x`
//! marks an X component on qubit `q`, bit `q` of `z` a Z component. Both
//! bits set means `Y` (the Hermitian letter, not `XZ`). Qubit `q` is the
//! `q`-th character of the textual form, so `"XIZ"` has X on qubit 0.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidSymbol(other)),
        }
    }
}

/// Element of {+1, +i, -1, -i}, stored as a number of quarter turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_quarter_turns(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// `+1.0` or `-1.0` for real phases, `None` otherwise.
    pub fn real_sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-qubit Paulis on `n` qubits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        Ok(PauliString { n, x: 0, z: 0 })
    }

    /// Builds a string from raw masks. Bits at or above `n` must be clear.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let valid = mask_below(n);
        if (x | z) & !valid != 0 {
            return Err(Error::InvalidParameter(format!(
                "mask bits set beyond qubit count {n}"
            )));
        }
        Ok(PauliString { n, x, z })
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Result<Self> {
        let mut s = PauliString::identity(paulis.len())?;
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        Ok(s)
    }

    /// Single non-identity letter on qubit `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, limit: n });
        }
        let mut s = PauliString::identity(n)?;
        s.set(q, p);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = p.bits();
        let bit = 1u64 << q;
        self.x = if xb { self.x | bit } else { self.x & !bit };
        self.z = if zb { self.z | bit } else { self.z & !bit };
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    /// Number of X or Y positions.
    pub fn flip_weight(&self) -> usize {
        self.x.count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when the string contains only `I` and `Z`.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let m = self.support_mask();
        (0..self.n).filter(move |q| m >> q & 1 == 1)
    }

    pub fn paulis(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(|q| self.get(q))
    }

    /// Embeds the string into a larger register, leaving the new qubits as `I`.
    pub fn widen(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::LengthMismatch { left: self.n, right: n });
        }
        PauliString::from_masks(n, self.x, self.z)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(symplectic_product(self, other) == 0)
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliString) -> Result<PhasedPauli> {
        self.check_len(other)?;
        Ok(product_unchecked(self, other))
    }
}

fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn symplectic_product(a: &PauliString, b: &PauliString) -> u32 {
    ((a.x & b.z).count_ones() + (a.z & b.x).count_ones()) % 2
}

// sigma(x,z) = i^{xz} X^x Z^z, so a product picks up
// i^{x1 z1 + x2 z2 - x3 z3} (-1)^{z1 x2}.
fn product_unchecked(a: &PauliString, b: &PauliString) -> PhasedPauli {
    let x = a.x ^ b.x;
    let z = a.z ^ b.z;
    let turns = (a.x & a.z).count_ones() as i64 + (b.x & b.z).count_ones() as i64
        + 2 * (a.z & b.x).count_ones() as i64
        - (x & z).count_ones() as i64;
    PhasedPauli {
        phase: Phase::from_quarter_turns(turns),
        string: PauliString { n: a.n, x, z },
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.paulis() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(Pauli::try_from)
            .collect::<Result<Vec<_>>>()?;
        PauliString::from_paulis(&letters)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A Pauli string with a phase in {+1, +i, -1, -i}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn new(phase: Phase, string: PauliString) -> Self {
        PhasedPauli { phase, string }
    }

    pub fn num_qubits(&self) -> usize {
        self.string.num_qubits()
    }

    pub fn mul(&self, other: &PhasedPauli) -> Result<PhasedPauli> {
        let p = self.string.mul(&other.string)?;
        Ok(PhasedPauli {
            phase: self.phase * other.phase * p.phase,
            string: p.string,
        })
    }

    /// Hermitian conjugate (Pauli letters are Hermitian, so only the phase changes).
    pub fn adjoint(&self) -> PhasedPauli {
        PhasedPauli {
            phase: self.phase.conj(),
            string: self.string,
        }
    }
}

impl From<PauliString> for PhasedPauli {
    fn from(string: PauliString) -> Self {
        PhasedPauli {
            phase: Phase::ONE,
            string,
        }
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.phase.quarter_turns() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{p}{}", self.string)
    }
}

/// Free-function form of [`PauliString::mul`].
pub fn multiply_paulis(p: &PauliString, q: &PauliString) -> Result<PhasedPauli> {
    p.mul(q)
}

/// Free-function form of [`PauliString::commutes`].
pub fn commutes(p: &PauliString, q: &PauliString) -> Result<bool> {
    p.commutes(q)
}

/// Majorana operator under the Jordan-Wigner map used throughout the crate:
/// `psi_{2j} = Z^{j} X I..`, `psi_{2j+1} = Z^{j} Y I..`.
pub fn majorana_operator(index: usize, n: usize) -> Result<PauliString> {
    if index >= 2 * n {
        return Err(Error::IndexOutOfRange {
            index,
            limit: 2 * n,
        });
    }
    let mut s = PauliString::identity(n)?;
    let site = index / 2;
    for q in 0..site {
        s.set(q, Pauli::Z);
    }
    s.set(site, if index % 2 == 0 { Pauli::X } else { Pauli::Y });
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_y_is_i_z() {
        let r = multiply_paulis(&ps("X"), &ps("Y")).unwrap();
        assert_eq!(r.phase, Phase::I);
        assert_eq!(r.string, ps("Z"));
    }

    #[test]
    fn single_qubit_table() {
        // (a, b, phase turns, result)
        let table = [
            ("Y", "X", 3, "Z"),
            ("Y", "Z", 1, "X"),
            ("Z", "Y", 3, "X"),
            ("Z", "X", 1, "Y"),
            ("X", "Z", 3, "Y"),
        ];
        for (a, b, turns, r) in table {
            let got = multiply_paulis(&ps(a), &ps(b)).unwrap();
            assert_eq!(got.phase.quarter_turns(), turns, "{a}{b}");
            assert_eq!(got.string, ps(r));
        }
    }

    #[test]
    fn involution() {
        for s in ["XYZI", "IIII", "YYYY", "ZXZX"] {
            let r = multiply_paulis(&ps(s), &ps(s)).unwrap();
            assert_eq!(r.phase, Phase::ONE);
            assert!(r.string.is_identity());
        }
    }

    #[test]
    fn commutation_cases() {
        assert!(commutes(&ps("XI"), &ps("IX")).unwrap());
        assert!(!commutes(&ps("X"), &ps("Z")).unwrap());
        assert!(commutes(&ps("XX"), &ps("ZZ")).unwrap());
        assert!(matches!(
            commutes(&ps("X"), &ps("XX")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        let s = ps("IXYZ");
        assert_eq!(s.to_string(), "IXYZ");
        assert_eq!(s.weight(), 3);
        assert_eq!(s.get(2), Pauli::Y);
        assert_eq!("IXQ".parse::<PauliString>(), Err(Error::InvalidSymbol('Q')));
    }

    #[test]
    fn majorana_convention() {
        assert_eq!(majorana_operator(0, 3).unwrap(), ps("XII"));
        assert_eq!(majorana_operator(1, 3).unwrap(), ps("YII"));
        assert_eq!(majorana_operator(4, 3).unwrap(), ps("ZZX"));
        assert_eq!(majorana_operator(5, 3).unwrap(), ps("ZZY"));
        assert!(majorana_operator(6, 3).is_err());
    }

    #[test]
    fn majoranas_pairwise_anticommute() {
        let n = 5;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let a = majorana_operator(i, n).unwrap();
                let b = majorana_operator(j, n).unwrap();
                assert_eq!(a.commutes(&b).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn sixty_four_qubits() {
        let mut s = PauliString::identity(64).unwrap();
        s.set(63, Pauli::Y);
        assert_eq!(s.weight(), 1);
        assert!(PauliString::identity(65).is_err());
    }
}
