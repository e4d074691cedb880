use num_complex::Complex64;

use super::{qubits_for_dim, Operator, C_ONE, C_ZERO};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;

/// Normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates dimension and normalization (`Σ|a|² = 1` within 1e-10).
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amps.len())?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} differs from 1"
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amps.into_iter().map(|a| a / norm).collect())
    }

    pub(crate) fn from_amplitudes_unchecked(amps: Vec<Complex64>) -> Self {
        let n_qubits = amps.len().trailing_zeros() as usize;
        Self { n_qubits, amps }
    }

    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("index 0 is always valid")
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C_ZERO; dim];
        amps[index] = C_ONE;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn kron(&self, other: &StateVector) -> StateVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|&a| other.amps.iter().map(move |&b| a * b))
            .collect();
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn projector(&self) -> Operator {
        Operator::projector(self)
    }

    pub fn scale_phase(&self, phase: Complex64) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|&a| a * phase).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_kron_orders_left_factor_first() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let psi = zero.kron(&one);
        assert_eq!(psi.probabilities(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_unnormalized_amplitudes() {
        assert!(StateVector::from_real(&[1.0, 1.0]).is_err());
        assert!(StateVector::from_real(&[1.0, 0.0, 0.0]).is_err());
        assert!(StateVector::normalized(vec![C_ZERO; 2]).is_err());
    }
}
