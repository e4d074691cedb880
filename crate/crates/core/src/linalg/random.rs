//! Haar-distributed states and unitaries, and Gaussian Hermitian matrices.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Operator, StateVector};

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn haar_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    let amps = (0..1usize << n_qubits)
        .map(|_| gaussian_complex(rng))
        .collect();
    StateVector::normalized(amps).expect("gaussian vector is non-zero")
}

pub fn random_product_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    (1..n_qubits).fold(haar_state(1, rng), |acc, _| acc.kron(&haar_state(1, rng)))
}

/// Hermitian matrix with independent Gaussian entries (GUE up to scale).
pub fn random_hermitian<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Operator {
    let g = Operator::from_fn(n_qubits, |_, _| gaussian_complex(rng));
    (&g + &g.adjoint()).scale(0.5)
}

/// Haar unitary from a Gram-Schmidt orthonormalized Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Operator {
    let d = 1usize << n_qubits;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    Operator::from_fn(n_qubits, |r, c| cols[c][r])
}

/// Random density matrix `G G† / tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Operator {
    let g = Operator::from_fn(n_qubits, |_, _| gaussian_complex(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(1.0 / tr)
}
