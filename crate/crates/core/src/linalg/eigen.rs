use num_complex::Complex64;

use super::{Operator, StateVector, C_ZERO};
use crate::error::Result;

/// Input Hermiticity tolerance for [`eig_hermitian`].
pub const EIG_HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `H = V Λ V†` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as the columns of a unitary.
    pub vectors: Operator,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> StateVector {
        let d = self.vectors.dim();
        StateVector::from_amplitudes_unchecked((0..d).map(|r| self.vectors[(r, k)]).collect())
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn reconstruct(&self) -> Operator {
        let d = self.vectors.dim();
        Operator::from_fn(self.vectors.n_qubits(), |r, c| {
            (0..d)
                .map(|k| self.vectors[(r, k)] * self.values[k] * self.vectors[(c, k)].conj())
                .sum()
        })
    }
}

/// Cyclic complex Jacobi diagonalization of a Hermitian operator.
///
/// Eigenvectors inside a degenerate cluster are an arbitrary orthonormal basis
/// of that cluster.
pub fn eig_hermitian(h: &Operator) -> Result<Eigen> {
    h.ensure_hermitian(EIG_HERMITIAN_TOL)?;
    let n = h.dim();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a = Operator::from_fn(h.n_qubits(), |r, c| 0.5 * (h[(r, c)] + h[(c, r)].conj()));
    let mut v = Operator::identity(h.n_qubits());

    let scale = a
        .as_slice()
        .iter()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let threshold = (scale * 1e-17).max(1e-300);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = Operator::from_fn(h.n_qubits(), |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut Operator, v: &mut Operator, p: usize, q: usize) {
    let g = a[(p, q)];
    let g_abs = g.norm();
    if g_abs < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = g / g_abs;
    let tau = (aqq - app) / (2.0 * g_abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on the (p, q) plane.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = C_ZERO;
    a[(q, p)] = C_ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::pauli::{pauli, Pauli};

    #[test]
    fn pauli_z_spectrum() {
        let e = eig_hermitian(&pauli(Pauli::Z)).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
    }

    #[test]
    fn pauli_y_eigenvectors_reconstruct() {
        let y = pauli(Pauli::Y);
        let e = eig_hermitian(&y).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
        assert!(e.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }
}
