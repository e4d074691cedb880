use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{qubits_for_dim, StateVector, C_ONE, C_ZERO};
use crate::error::{Error, Result};

/// Dense complex square matrix acting on `n_qubits` qubits, stored row-major.
///
/// Basis index bit `n_qubits - 1 - k` belongs to qubit `k`, so qubit 0 is the
/// most significant bit and `a.kron(&b)` places `a` on the leading qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    n_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            n_qubits,
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let mut out = Self::zeros(n_qubits);
        for i in 0..out.dim {
            out[(i, i)] = C_ONE;
        }
        out
    }

    /// Builds an operator from row-major entries; `entries.len()` must be a
    /// square of a power of two.
    pub fn from_row_major(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        let n_qubits = qubits_for_dim(dim)?;
        Ok(Self {
            n_qubits,
            dim,
            data: entries,
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect::<Vec<_>>();
        let out = Self::from_row_major(entries)?;
        if rows.iter().any(|r| r.len() != out.dim) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Ok(out)
    }

    pub fn from_fn(n_qubits: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let dim = 1usize << n_qubits;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self {
            n_qubits,
            dim,
            data,
        }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = qubits_for_dim(values.len())?;
        Ok(Self::from_fn(n, |r, c| {
            if r == c {
                Complex64::new(values[r], 0.0)
            } else {
                C_ZERO
            }
        }))
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        let (x, y) = (a.amplitudes(), b.amplitudes());
        Ok(Self::from_fn(a.n_qubits(), |r, c| x[r] * y[c].conj()))
    }

    pub fn projector(psi: &StateVector) -> Self {
        let x = psi.amplitudes();
        Self::from_fn(psi.n_qubits(), |r, c| x[r] * x[c].conj())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n_qubits, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_qubits, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|&x| x * s).collect(),
            ..self.clone()
        }
    }

    /// Kronecker product with `self` as the most significant factor.
    pub fn kron(&self, other: &Operator) -> Operator {
        let n = self.n_qubits + other.n_qubits;
        let od = other.dim;
        Operator::from_fn(n, |r, c| self[(r / od, c / od)] * other[(r % od, c % od)])
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut out = Operator::zeros(self.n_qubits);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == C_ZERO {
                    continue;
                }
                let row = &other.data[k * d..(k + 1) * d];
                let dst = &mut out.data[r * d..(r + 1) * d];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: psi.dim(),
            });
        }
        let x = psi.amplitudes();
        let amps = (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect();
        Ok(StateVector::from_amplitudes_unchecked(amps))
    }

    /// `⟨a|self|b⟩`.
    pub fn sandwich(&self, a: &StateVector, b: &StateVector) -> Result<Complex64> {
        let hb = self.apply(b)?;
        Ok(a.inner(&hb))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|H - H†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            Err(Error::NotHermitian { deviation })
        } else {
            Ok(())
        }
    }

    /// Largest entry of `|U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has matching dimension");
        prod.max_abs_diff(&Operator::identity(self.n_qubits))
    }

    /// Distance to `other` after removing the best global phase.
    pub fn phase_distance(&self, other: &Operator) -> f64 {
        let overlap: Complex64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() < 1e-300 {
            return self.max_abs_diff(other);
        }
        let phase = overlap / overlap.norm();
        self.scale_complex(phase).max_abs_diff(other)
    }

    /// Hilbert-Schmidt product `tr[self · other]`.
    pub fn trace_product(&self, other: &Operator) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let d = self.dim;
        let mut acc = C_ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += self.data[r * d + c] * other.data[c * d + r];
            }
        }
        Ok(acc)
    }

    /// Reduces onto the qubits in `keep` (listed in any order; the result keeps
    /// ascending qubit order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        let n = self.n_qubits;
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.is_empty() {
            return Err(Error::InvalidQubits("keep set is empty".into()));
        }
        if kept.len() != keep.len() {
            return Err(Error::InvalidQubits("keep set has repeated qubits".into()));
        }
        if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidQubits(format!(
                "qubit {bad} out of range for {n}-qubit operator"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let kn = kept.len();
        let compose = |k_bits: usize, t_bits: usize| -> usize {
            let mut idx = 0usize;
            for (j, &q) in kept.iter().enumerate() {
                if (k_bits >> (kn - 1 - j)) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            for (j, &q) in traced.iter().enumerate() {
                if (t_bits >> (traced.len() - 1 - j)) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            idx
        };
        let mut out = Operator::zeros(kn);
        for r in 0..(1 << kn) {
            for c in 0..(1 << kn) {
                let mut acc = C_ZERO;
                for t in 0..(1usize << traced.len()) {
                    acc += self[(compose(r, t), compose(c, t))];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    fn check_same_dim(&self, other: &Operator) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        } else {
            Ok(())
        }
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs).expect("operator dimensions differ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{pauli, Pauli};

    #[test]
    fn kron_of_identities_is_identity() {
        let i = Operator::identity(1);
        assert_eq!(i.kron(&i), Operator::identity(2));
    }

    #[test]
    fn kron_zz_is_parity_diagonal() {
        let z = pauli(Pauli::Z);
        let zz = z.kron(&z);
        assert_eq!(zz, Operator::diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap());
    }

    #[test]
    fn kron_places_left_factor_on_leading_qubit() {
        // X ⊗ I flips qubit 0, the most significant bit.
        let x = pauli(Pauli::X).kron(&Operator::identity(1));
        let psi = x.apply(&StateVector::basis(2, 0b00).unwrap()).unwrap();
        assert_eq!(psi, StateVector::basis(2, 0b10).unwrap());
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let op = Operator::identity(2);
        assert!(matches!(
            op.partial_trace(&[]),
            Err(Error::InvalidQubits(_))
        ));
        assert!(matches!(
            op.partial_trace(&[2]),
            Err(Error::InvalidQubits(_))
        ));
        assert!(matches!(
            op.partial_trace(&[0, 0]),
            Err(Error::InvalidQubits(_))
        ));
    }

    #[test]
    fn partial_trace_keeps_requested_order_independent() {
        let a = Operator::diagonal(&[0.25, 0.75]).unwrap();
        let b = Operator::diagonal(&[0.5, 0.5]).unwrap();
        let c = Operator::diagonal(&[0.1, 0.9]).unwrap();
        let abc = a.kron(&b).kron(&c);
        let ac = abc.partial_trace(&[2, 0]).unwrap();
        assert!(ac.max_abs_diff(&a.kron(&c)) < 1e-15);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let z = pauli(Pauli::Z);
        let rotated = z.scale_complex(Complex64::from_polar(1.0, 0.7));
        assert!(z.phase_distance(&rotated) < 1e-15);
        assert!(z.phase_distance(&pauli(Pauli::X)) > 0.5);
    }
}
