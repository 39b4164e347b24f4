//! Reference linear algebra written independently of the library: Pauli
//! matrices from explicit Kronecker products, Taylor-series exponentials.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use tepai_core::PauliHamiltonian;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(p: char) -> M {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        'I' => M::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => M::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => M::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => M::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad Pauli {p}"),
    }
}

/// Character `q` acts on qubit `q`, which is bit `q` of the basis index.
pub fn pauli(s: &str) -> M {
    let mut m = M::from_element(1, 1, c(1.0, 0.0));
    for ch in s.chars() {
        m = single(ch).kronecker(&m);
    }
    m
}

pub fn hamiltonian(h: &PauliHamiltonian) -> M {
    let dim = 1 << h.num_qubits();
    let mut m = M::identity(dim, dim) * c(h.identity_offset(), 0.0);
    for t in h.terms() {
        m += pauli(&t.string.to_string()) * c(t.coeff, 0.0);
    }
    m
}

fn one_norm(m: &M) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &M) -> M {
    let norm = one_norm(a);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a * c(0.5f64.powi(squarings as i32), 0.0);
    let n = a.nrows();
    let mut term = M::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i t H)`.
pub fn evolution(h: &M, t: f64) -> M {
    expm(&(h * c(0.0, -t)))
}

pub fn rotation(p: &str, theta: f64) -> M {
    let n = p.len();
    M::identity(1 << n, 1 << n) * c((theta / 2.0).cos(), 0.0) - pauli(p) * c(0.0, (theta / 2.0).sin())
}

pub fn vector(amps: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(amps.len(), 1, amps)
}

/// Lowest eigenpair of `h` within basis states that have `ones` bits set.
pub fn sector_ground(h: &M, ones: u32) -> (f64, Vec<Complex64>) {
    let idx: Vec<usize> = (0..h.nrows()).filter(|b| b.count_ones() == ones).collect();
    let sub = M::from_fn(idx.len(), idx.len(), |r, k| h[(idx[r], idx[k])]);
    let eig = sub.symmetric_eigen();
    let (k, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, &e)| if e < acc.1 { (k, e) } else { acc });
    let mut v = vec![c(0.0, 0.0); h.nrows()];
    for (r, &b) in idx.iter().enumerate() {
        v[b] = eig.eigenvectors[(r, k)];
    }
    (e, v)
}
