//! Dense statevector over `n` qubits.
//!
//! Basis index bit `q` is qubit `q`. Operators defined on `m <= n` qubits act
//! on the lowest `m` qubits, which lets a system register share a state with
//! ancillas placed above it.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hamiltonian::PauliHamiltonian;
use crate::pauli::{PauliString, PhasedPauli};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Diagonal Hamiltonian with its basis-state energies tabulated once.
#[derive(Clone, Debug)]
pub struct DiagonalHamiltonian {
    hamiltonian: PauliHamiltonian,
    energies: Vec<f64>,
}

impl DiagonalHamiltonian {
    pub fn new(hamiltonian: PauliHamiltonian) -> Result<Self> {
        if let Some(t) = hamiltonian.terms().iter().find(|t| !t.string.is_diagonal()) {
            return Err(Error::NonDiagonal(t.string.to_string()));
        }
        let dim = 1usize << hamiltonian.num_qubits();
        let energies = (0..dim as u64)
            .map(|b| hamiltonian.diagonal_energy(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalHamiltonian {
            hamiltonian,
            energies,
        })
    }

    pub fn hamiltonian(&self) -> &PauliHamiltonian {
        &self.hamiltonian
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    pub fn energy(&self, bits: u64) -> f64 {
        self.energies[bits as usize & (self.energies.len() - 1)]
    }
}

// P|b> = f(b) |b ^ x> with f(b) = i^{#Y} (-1)^{|b & z|}.
#[inline]
fn pauli_factor(base: Complex64, z: u64, b: usize) -> Complex64 {
    if (b as u64 & z).count_ones() % 2 == 0 {
        base
    } else {
        -base
    }
}

fn y_base(p: &PauliString) -> Complex64 {
    crate::pauli::Phase::from_quarter_turns((p.x_mask() & p.z_mask()).count_ones() as i64)
        .to_complex()
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        StateVector::basis(n, 0)
    }

    pub fn basis(n: usize, bits: u64) -> Self {
        assert!(n <= 30, "statevector limited to 30 qubits");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[bits as usize] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidParameter(format!("state norm {norm} != 1")));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Random state with i.i.d. complex Gaussian amplitudes, normalised.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(&mut *rng),
                    StandardNormal.sample(&mut *rng),
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector { n, amps }
    }

    /// `self ⊗ |0>` on a register with `extra` more qubits placed above.
    pub fn extended(&self, extra: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (self.n + extra)];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        StateVector {
            n: self.n + extra,
            amps,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_operator(&self, p: &PauliString, control: Option<usize>) -> Result<()> {
        if p.num_qubits() > self.n {
            return Err(Error::LengthMismatch {
                left: p.num_qubits(),
                right: self.n,
            });
        }
        if let Some(c) = control {
            self.check_qubit(c)?;
            if p.support_mask() >> c & 1 == 1 {
                return Err(Error::ControlInSupport(c));
            }
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange {
                index: q,
                limit: self.n,
            });
        }
        Ok(())
    }

    fn control_mask(control: Option<usize>) -> usize {
        control.map_or(0, |c| 1 << c)
    }

    /// Applies `phase * P`, optionally controlled on `control` being |1>.
    pub fn apply_pauli(&mut self, p: &PhasedPauli, control: Option<usize>) -> Result<()> {
        self.check_operator(&p.string, control)?;
        let cmask = Self::control_mask(control);
        let base = y_base(&p.string) * p.phase.to_complex();
        let x = p.string.x_mask() as usize;
        let z = p.string.z_mask();
        if x == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                if b & cmask == cmask {
                    *a *= pauli_factor(base, z, b);
                }
            }
            return Ok(());
        }
        let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & pivot != 0 || b & cmask != cmask {
                continue;
            }
            let b2 = b ^ x;
            let a = self.amps[b];
            let a2 = self.amps[b2];
            self.amps[b] = pauli_factor(base, z, b2) * a2;
            self.amps[b2] = pauli_factor(base, z, b) * a;
        }
        Ok(())
    }

    /// Applies `exp(-i theta/2 P)`, optionally controlled.
    pub fn apply_pauli_rotation(
        &mut self,
        p: &PauliString,
        theta: f64,
        control: Option<usize>,
    ) -> Result<()> {
        if p.is_identity() {
            return Err(Error::IdentityRotation);
        }
        self.check_operator(p, control)?;
        let cmask = Self::control_mask(control);
        let (s, c) = (theta / 2.0).sin_cos();
        let base = y_base(p);
        let x = p.x_mask() as usize;
        let z = p.z_mask();
        let mis = Complex64::new(0.0, -s);
        if x == 0 {
            let plus = Complex64::new(c, -s);
            let minus = Complex64::new(c, s);
            for (b, a) in self.amps.iter_mut().enumerate() {
                if b & cmask == cmask {
                    *a *= if (b as u64 & z).count_ones() % 2 == 0 {
                        plus
                    } else {
                        minus
                    };
                }
            }
            return Ok(());
        }
        let pivot = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amps.len() {
            if b & pivot != 0 || b & cmask != cmask {
                continue;
            }
            let b2 = b ^ x;
            let a = self.amps[b];
            let a2 = self.amps[b2];
            self.amps[b] = c * a + mis * pauli_factor(base, z, b2) * a2;
            self.amps[b2] = c * a2 + mis * pauli_factor(base, z, b) * a;
        }
        Ok(())
    }

    /// Multiplies each amplitude by `exp(-i t E(b))`, with `E` the diagonal
    /// energy (identity offset included) of the lower qubits of `b`.
    pub fn apply_diagonal_evolution(
        &mut self,
        h: &DiagonalHamiltonian,
        t: f64,
        control: Option<usize>,
    ) -> Result<()> {
        if h.num_qubits() > self.n {
            return Err(Error::LengthMismatch {
                left: h.num_qubits(),
                right: self.n,
            });
        }
        if let Some(c) = control {
            self.check_qubit(c)?;
            if c < h.num_qubits() {
                return Err(Error::ControlInSupport(c));
            }
        }
        if t == 0.0 {
            return Ok(());
        }
        let cmask = Self::control_mask(control);
        let sys = (1usize << h.num_qubits()) - 1;
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & cmask == cmask {
                let phase = -t * h.energies[b & sys];
                *a *= Complex64::from_polar(1.0, phase);
            }
        }
        Ok(())
    }

    /// Multiplies by `exp(i phi)`; with a control this is a phase gate on the control.
    pub fn apply_global_phase(&mut self, phi: f64, control: Option<usize>) -> Result<()> {
        if let Some(c) = control {
            self.check_qubit(c)?;
        }
        let cmask = Self::control_mask(control);
        let f = Complex64::from_polar(1.0, phi);
        for (b, a) in self.amps.iter_mut().enumerate() {
            if b & cmask == cmask {
                *a *= f;
            }
        }
        Ok(())
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        for b in 0..self.amps.len() {
            if b & bit != 0 {
                continue;
            }
            let a0 = self.amps[b];
            let a1 = self.amps[b | bit];
            self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[b | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, q: usize) -> Result<()> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(q, [[h, h], [h, -h]])
    }

    pub fn apply_s(&mut self, q: usize) -> Result<()> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        self.apply_1q(q, [[one, zero], [zero, I]])
    }

    pub fn apply_sdg(&mut self, q: usize) -> Result<()> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        self.apply_1q(q, [[one, zero], [zero, -I]])
    }

    /// `exp(-i theta/2 Z_q)`.
    pub fn apply_rz(&mut self, q: usize, theta: f64) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = lo.conj();
        for (b, a) in self.amps.iter_mut().enumerate() {
            *a *= if b & bit == 0 { lo } else { hi };
        }
        Ok(())
    }

    /// Phase gate `diag(1, exp(i phi))` on qubit `q`.
    pub fn apply_phase(&mut self, q: usize, phi: f64) -> Result<()> {
        self.apply_global_phase(phi, Some(q))
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::ControlInSupport(control));
        }
        let (cb, tb) = (1usize << control, 1usize << target);
        for b in 0..self.amps.len() {
            if b & cb != 0 && b & tb == 0 {
                self.amps.swap(b, b | tb);
            }
        }
        Ok(())
    }

    /// `exp(-i theta/2 Z_a Z_b)`.
    pub fn apply_rzz(&mut self, a: usize, b: usize, theta: f64) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::InvalidParameter("RZZ needs two distinct qubits".into()));
        }
        let m = (1u64 << a) | (1u64 << b);
        let even = Complex64::from_polar(1.0, -theta / 2.0);
        let odd = even.conj();
        for (i, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if (i as u64 & m).count_ones() % 2 == 0 {
                even
            } else {
                odd
            };
        }
        Ok(())
    }

    /// `<psi| phase * P |psi>`.
    pub fn expectation_pauli(&self, p: &PhasedPauli) -> Result<Complex64> {
        self.check_operator(&p.string, None)?;
        let base = y_base(&p.string) * p.phase.to_complex();
        let x = p.string.x_mask() as usize;
        let z = p.string.z_mask();
        // <psi|P|psi> = sum_b conj(a[b ^ x]) f(b) a[b]
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(b, a)| self.amps[b ^ x].conj() * pauli_factor(base, z, b) * a)
            .sum())
    }

    /// Marginal distribution over `qubits`; entry `k` has bit `i` equal to
    /// the outcome of `qubits[i]`.
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        if qubits.is_empty() {
            return Err(Error::InvalidParameter("no qubits to measure".into()));
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let k = gather_bits(b, qubits);
            probs[k] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Draws `shots` computational-basis outcomes on `qubits`.
    pub fn measure_shots<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        shots: usize,
        rng: &mut R,
    ) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidParameter("shots must be at least 1".into()));
        }
        let probs = self.marginal_probabilities(qubits)?;
        let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        Ok((0..shots).map(|_| dist.sample(rng) as u64).collect())
    }
}

fn gather_bits(b: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &q)| acc | ((b >> q & 1) << i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn x_flips_zero() {
        let mut s = StateVector::zero(1);
        s.apply_pauli(&ps("X").into(), None).unwrap();
        assert_eq!(s, StateVector::basis(1, 1));
    }

    #[test]
    fn controlled_x_with_control_off_is_identity() {
        let mut s = StateVector::zero(2);
        s.apply_pauli(&ps("X").into(), Some(1)).unwrap();
        assert_eq!(s, StateVector::zero(2));
        let mut t = StateVector::basis(2, 0b10);
        t.apply_pauli(&ps("X").into(), Some(1)).unwrap();
        assert_eq!(t, StateVector::basis(2, 0b11));
    }

    #[test]
    fn control_inside_support_is_rejected() {
        let mut s = StateVector::zero(2);
        assert_eq!(
            s.apply_pauli(&ps("XX").into(), Some(1)),
            Err(Error::ControlInSupport(1))
        );
        assert_eq!(
            s.apply_pauli_rotation(&ps("IZ"), 0.1, Some(1)),
            Err(Error::ControlInSupport(1))
        );
    }

    #[test]
    fn rotation_edge_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random(3, &mut rng);
        let p = ps("XYZ");
        let mut s = psi.clone();
        s.apply_pauli_rotation(&p, 0.0, None).unwrap();
        assert_eq!(s, psi);

        let mut s = psi.clone();
        s.apply_pauli_rotation(&p, PI, None).unwrap();
        let mut t = psi.clone();
        t.apply_pauli(&PhasedPauli::new(Phase::MINUS_I, p), None).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!(close(*a, *b));
        }
        assert_eq!(s.apply_pauli_rotation(&ps("III"), 0.3, None), Err(Error::IdentityRotation));
    }

    #[test]
    fn rz_quarter_turn_on_plus() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut s = StateVector::from_amplitudes(vec![h, h]).unwrap();
        s.apply_pauli_rotation(&ps("Z"), PI / 2.0, None).unwrap();
        let want0 = Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0);
        let want1 = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
        assert!(close(s.amplitudes()[0], want0));
        assert!(close(s.amplitudes()[1], want1));
    }

    #[test]
    fn diagonal_evolution_of_z() {
        let h = PauliHamiltonian::new(
            1,
            0.0,
            [crate::hamiltonian::PauliTerm {
                coeff: 1.0,
                string: ps("Z"),
            }],
        )
        .unwrap();
        let d = DiagonalHamiltonian::new(h).unwrap();
        let t = 0.37;
        let mut s = StateVector::random(1, &mut ChaCha8Rng::seed_from_u64(1));
        let before = s.clone();
        s.apply_diagonal_evolution(&d, 0.0, None).unwrap();
        assert_eq!(s, before);
        s.apply_diagonal_evolution(&d, t, None).unwrap();
        assert!(close(s.amplitudes()[0], before.amplitudes()[0] * Complex64::from_polar(1.0, -t)));
        assert!(close(s.amplitudes()[1], before.amplitudes()[1] * Complex64::from_polar(1.0, t)));
    }

    #[test]
    fn non_diagonal_rejected() {
        let h = PauliHamiltonian::new(
            1,
            0.0,
            [crate::hamiltonian::PauliTerm {
                coeff: 1.0,
                string: ps("X"),
            }],
        )
        .unwrap();
        assert!(matches!(DiagonalHamiltonian::new(h), Err(Error::NonDiagonal(_))));
    }

    #[test]
    fn expectation_basics() {
        let s = StateVector::zero(1);
        assert!(close(s.expectation_pauli(&ps("Z").into()).unwrap(), 1.0.into()));
        assert!(close(s.expectation_pauli(&ps("X").into()).unwrap(), 0.0.into()));
    }

    #[test]
    fn shots_on_one_state() {
        let s = StateVector::basis(1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(s.measure_shots(&[0], 5, &mut rng).unwrap(), vec![1; 5]);
        assert!(s.measure_shots(&[], 5, &mut rng).is_err());
        assert!(s.measure_shots(&[0], 0, &mut rng).is_err());
    }

    #[test]
    fn shots_on_plus_are_balanced() {
        let mut s = StateVector::zero(1);
        s.apply_hadamard(0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let zeros = s
            .measure_shots(&[0], n, &mut rng)
            .unwrap()
            .iter()
            .filter(|&&b| b == 0)
            .count() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((zeros - 0.5 * n as f64).abs() < 5.0 * sigma);
    }

    #[test]
    fn bell_marginal() {
        let mut s = StateVector::zero(2);
        s.apply_hadamard(0).unwrap();
        s.apply_cx(0, 1).unwrap();
        let p = s.marginal_probabilities(&[0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let joint = s.marginal_probabilities(&[1, 0]).unwrap();
        assert!(joint[0b01].abs() < 1e-12 && joint[0b10].abs() < 1e-12);
    }
}
