use num_complex::Complex64;

use super::{synthesize_state_prep, Circuit};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, Operator, StateVector};

const NEGATIVE_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// `Σᵢ √λᵢ |eᵢ⟩_S |i⟩_A` over the spectrum of `w`, eigenvalues ranked in
/// descending order and clamped at zero.
pub fn purification_state(w: &Operator) -> Result<StateVector> {
    let tr = w.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidArgument(format!(
            "purification needs unit trace, got {tr}"
        )));
    }
    let eig = eig_hermitian(w)?;
    if eig.min() < -NEGATIVE_TOL {
        return Err(Error::InvalidArgument(format!(
            "purification needs a non-negative operator, found eigenvalue {:e}",
            eig.min()
        )));
    }
    let n = w.n_qubits();
    let d = w.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (i, &lambda) in eig.values.iter().enumerate() {
        let weight = lambda.max(0.0).sqrt();
        if weight == 0.0 {
            continue;
        }
        for s in 0..d {
            amps[(s << n) | i] = weight * eig.vectors[(s, i)];
        }
    }
    StateVector::normalized(amps)
}

/// `2n`-wire circuit preparing [`purification_state`]: wires `0..n` carry
/// the system and `n..2n` the ancilla.
pub fn purification_circuit(w: &Operator) -> Result<Circuit> {
    let target = purification_state(w)?;
    Ok(synthesize_state_prep(&target)?.with_name("purification"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::simulate_statevector;
    use crate::linalg::random::random_density;
    use crate::linalg::DensityMatrix;
    use crate::seed::rng_from_seed;

    fn system_marginal(c: &Circuit, n: usize) -> Operator {
        let psi = simulate_statevector(c);
        DensityMatrix::pure(&psi)
            .partial_trace(&(0..n).collect::<Vec<_>>())
            .unwrap()
            .into_operator()
    }

    #[test]
    fn pure_operator_prepares_zero() {
        let w = StateVector::zero_state(1).projector();
        let c = purification_circuit(&w).unwrap();
        assert!(c.is_empty());
        let psi = simulate_statevector(&c);
        assert!((psi.fidelity(&StateVector::zero_state(2)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_operators_recovered() {
        let mut rng = rng_from_seed(9);
        for n in 1..=2 {
            for _ in 0..50 {
                let w = random_density(n, &mut rng);
                let c = purification_circuit(&w).unwrap();
                assert_eq!(c.width(), 2 * n);
                assert!(system_marginal(&c, n).max_abs_diff(&w) < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_negative_and_untraced() {
        let z = Operator::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        assert!(purification_circuit(&z).is_err());
        assert!(purification_circuit(&Operator::identity(1)).is_err());
    }
}
