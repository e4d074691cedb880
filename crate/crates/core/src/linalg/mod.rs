//! Dense complex linear algebra for small qubit registers.
//!
//! Qubit 0 is the most significant bit of every basis index, matching the
//! left-to-right order of tensor products.

mod density;
mod eigen;
mod operator;
mod state;

pub mod bell;
pub mod pauli;
pub mod random;

pub use density::{partial_trace, DensityMatrix};
pub use eigen::{eig_hermitian, Eigen};
pub use operator::Operator;
pub use state::StateVector;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Entropy eigenvalue cutoff.
const ENTROPY_EPS: f64 = 1e-12;

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        Err(Error::NotPowerOfTwo(dim))
    } else {
        Ok(dim.trailing_zeros() as usize)
    }
}

/// Kronecker product, left factor most significant.
pub trait TensorProduct {
    fn tensor(&self, other: &Self) -> Self;
}

impl TensorProduct for Operator {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

impl TensorProduct for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

impl TensorProduct for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        self.kron(other)
    }
}

pub fn tensor_product<T: TensorProduct>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Anything an observable can be evaluated on.
pub trait Expectation {
    /// Complex `tr[H ρ]` before the imaginary part is discarded.
    fn raw_expectation(&self, h: &Operator) -> Result<Complex64>;
}

impl Expectation for StateVector {
    fn raw_expectation(&self, h: &Operator) -> Result<Complex64> {
        h.sandwich(self, self)
    }
}

impl Expectation for DensityMatrix {
    fn raw_expectation(&self, h: &Operator) -> Result<Complex64> {
        h.trace_product(self.as_operator())
    }
}

/// Real expectation value `tr[H ρ]` of a Hermitian observable.
pub fn expectation<S: Expectation + ?Sized>(h: &Operator, state: &S) -> Result<f64> {
    h.ensure_hermitian(eigen::EIG_HERMITIAN_TOL)?;
    let value = state.raw_expectation(h)?;
    if value.im.abs() > 1e-10 {
        return Err(Error::Tolerance(format!(
            "expectation has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Base-2 von Neumann entropy; eigenvalues below 1e-12 count as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let spectrum = eig_hermitian(rho.as_operator()).expect("density matrices are Hermitian");
    let s: f64 = spectrum
        .values
        .iter()
        .filter(|&&l| l > ENTROPY_EPS)
        .map(|&l| -l * l.log2())
        .sum();
    s.clamp(0.0, rho.n_qubits() as f64)
}

/// Entropy of entanglement of a bipartite pure state across `subsystem`.
pub fn entanglement_entropy(psi: &StateVector, subsystem: &[usize]) -> Result<f64> {
    let reduced = DensityMatrix::pure(psi).partial_trace(subsystem)?;
    Ok(von_neumann_entropy(&reduced))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_basis_states() {
        let psi = tensor_product(
            &StateVector::basis(1, 0).unwrap(),
            &StateVector::basis(1, 1).unwrap(),
        );
        assert_eq!(psi.probabilities(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::pure(&bell::phi_plus());
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((von_neumann_entropy(&mixed) - 1.0).abs() < 1e-12);
        let marginal = pure.partial_trace(&[1]).unwrap();
        assert!((von_neumann_entropy(&marginal) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let h = Operator::identity(2);
        assert!(matches!(
            expectation(&h, &StateVector::zero_state(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_quarter_has_unit_trace_expectation() {
        let rho = DensityMatrix::maximally_mixed(2);
        let h = Operator::identity(2);
        assert!((expectation(&h, &rho).unwrap() - 1.0).abs() < 1e-15);
    }
}
