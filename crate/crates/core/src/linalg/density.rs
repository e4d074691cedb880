use super::{eig_hermitian, Operator, StateVector};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Mixed state: Hermitian, unit trace, eigenvalues ≥ -1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        op.ensure_hermitian(HERMITIAN_TOL)?;
        let tr = op.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = eig_hermitian(&op)?
            .values
            .last()
            .copied()
            .unwrap_or_default();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(op))
    }

    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        Self(op)
    }

    pub fn pure(psi: &StateVector) -> Self {
        Self(Operator::projector(psi))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = (1usize << n_qubits) as f64;
        Self(Operator::identity(n_qubits).scale(1.0 / d))
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut acc = Operator::zeros(first.1.n_qubits());
        for (w, rho) in parts {
            if rho.dim() != acc.dim() {
                return Err(Error::DimensionMismatch {
                    expected: acc.dim(),
                    found: rho.dim(),
                });
            }
            acc = &acc + &rho.0.scale(*w);
        }
        Self::new(acc)
    }

    pub fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(self.0.kron(&other.0))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        Ok(Self(self.0.partial_trace(keep)?))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).map(|c| c.re).unwrap_or(0.0)
    }
}

impl AsRef<Operator> for DensityMatrix {
    fn as_ref(&self) -> &Operator {
        &self.0
    }
}

/// Reduced state of `rho` on the qubits in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bell;

    #[test]
    fn ebit_marginal_is_maximally_mixed() {
        let rho = DensityMatrix::pure(&bell::phi_plus());
        let reduced = rho.partial_trace(&[0]).unwrap();
        let expected = DensityMatrix::maximally_mixed(1);
        assert!(reduced.as_operator().max_abs_diff(expected.as_operator()) < 1e-15);
    }

    #[test]
    fn product_reduces_to_factor() {
        let a = DensityMatrix::mixture(&[
            (0.3, DensityMatrix::pure(&StateVector::basis(1, 0).unwrap())),
            (0.7, DensityMatrix::pure(&bell::plus())),
        ])
        .unwrap();
        let b = DensityMatrix::pure(&StateVector::basis(1, 1).unwrap());
        let reduced = a.kron(&b).partial_trace(&[0]).unwrap();
        assert!(reduced.as_operator().max_abs_diff(a.as_operator()) < 1e-15);
    }

    #[test]
    fn rejects_non_states() {
        assert!(DensityMatrix::new(Operator::identity(1)).is_err());
        let neg = Operator::diagonal(&[1.5, -0.5]).unwrap();
        assert!(DensityMatrix::new(neg).is_err());
    }
}
