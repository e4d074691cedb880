use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, Operator, StateVector};

/// Eigenvalues closer to zero than this belong to neither sign class.
const ZERO_TOL: f64 = 1e-10;
/// Spread below which a sign class counts as flat.
const FLAT_TOL: f64 = 1e-10;

/// `W = W₊ − W₋` with `W₊ = Σ λᵢ|eᵢ⟩⟨eᵢ|` over positive eigenvalues and `W₋`
/// the same over the magnitudes of the negative ones.
///
/// When every eigenvalue in a class is equal to `c±` the class collapses to
/// `c±·P±`; otherwise the per-eigenvector weights are kept.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    n_qubits: usize,
    positive: Vec<(f64, StateVector)>,
    negative: Vec<(f64, StateVector)>,
}

fn uniform(part: &[(f64, StateVector)]) -> Option<f64> {
    let first = part.first()?.0;
    part.iter()
        .all(|(w, _)| (w - first).abs() <= FLAT_TOL)
        .then_some(first)
}

fn projector_sum(n_qubits: usize, part: &[(f64, StateVector)], weighted: bool) -> Operator {
    part.iter().fold(Operator::zeros(n_qubits), |acc, (w, v)| {
        let p = v.projector();
        &acc + &if weighted { p.scale(*w) } else { p }
    })
}

impl SpectralSplit {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `(λᵢ, |eᵢ⟩)` for the strictly positive eigenvalues, largest first.
    pub fn positive(&self) -> &[(f64, StateVector)] {
        &self.positive
    }

    /// `(|λᵢ|, |eᵢ⟩)` for the strictly negative eigenvalues.
    pub fn negative(&self) -> &[(f64, StateVector)] {
        &self.negative
    }

    /// `c₊` when the positive class is flat.
    pub fn c_plus(&self) -> Option<f64> {
        uniform(&self.positive)
    }

    /// `c₋` when the negative class is flat.
    pub fn c_minus(&self) -> Option<f64> {
        uniform(&self.negative)
    }

    pub fn p_plus(&self) -> Operator {
        projector_sum(self.n_qubits, &self.positive, false)
    }

    pub fn p_minus(&self) -> Operator {
        projector_sum(self.n_qubits, &self.negative, false)
    }

    pub fn positive_part(&self) -> Operator {
        projector_sum(self.n_qubits, &self.positive, true)
    }

    pub fn negative_part(&self) -> Operator {
        projector_sum(self.n_qubits, &self.negative, true)
    }

    pub fn reconstruct(&self) -> Operator {
        &self.positive_part() - &self.negative_part()
    }
}

pub fn spectral_split(w: &Operator) -> Result<SpectralSplit> {
    let eig = eig_hermitian(w)?;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda > ZERO_TOL {
            positive.push((lambda, eig.vector(k)));
        } else if lambda < -ZERO_TOL {
            negative.push((-lambda, eig.vector(k)));
        }
    }
    negative.reverse();
    if positive.is_empty() || negative.is_empty() {
        return Err(Error::InvalidArgument(
            "spectral split needs eigenvalues of both signs".into(),
        ));
    }
    Ok(SpectralSplit {
        n_qubits: w.n_qubits(),
        positive,
        negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{pauli, Pauli};

    #[test]
    fn pauli_z_split() {
        let s = spectral_split(&pauli(Pauli::Z)).unwrap();
        assert_eq!(s.c_plus(), Some(1.0));
        assert_eq!(s.c_minus(), Some(1.0));
        let p0 = Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let p1 = Operator::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(s.p_plus().max_abs_diff(&p0) < 1e-15);
        assert!(s.p_minus().max_abs_diff(&p1) < 1e-15);
    }

    #[test]
    fn definite_operator_rejected() {
        assert!(spectral_split(&Operator::identity(1)).is_err());
    }
}
