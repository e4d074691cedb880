use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::pauli::{pauli, Pauli};
use crate::linalg::{Operator, C_ONE, C_ZERO};

/// Coefficients smaller than this are dropped.
pub const PAULI_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub paulis: Vec<Pauli>,
}

impl PauliTerm {
    pub fn label(&self) -> String {
        self.paulis.iter().map(|p| p.symbol()).collect()
    }

    /// Single-qubit Hermitian factors, qubit 0 first.
    pub fn factors(&self) -> Vec<Operator> {
        self.paulis.iter().map(|&p| pauli(p)).collect()
    }

    pub fn operator(&self) -> Operator {
        let mut it = self.paulis.iter().map(|&p| pauli(p));
        let first = it.next().unwrap_or_else(|| Operator::identity(0));
        it.fold(first, |acc, f| acc.kron(&f))
            .scale(self.coefficient)
    }
}

/// `W = Σ_s c_s σ_s` over local Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<PauliTerm>,
}

impl LocalDecomposition {
    pub fn coefficient(&self, label: &str) -> f64 {
        self.terms
            .iter()
            .find(|t| t.label().eq_ignore_ascii_case(label))
            .map_or(0.0, |t| t.coefficient)
    }

    pub fn labels(&self) -> Vec<String> {
        self.terms.iter().map(PauliTerm::label).collect()
    }

    pub fn reconstruct(&self) -> Operator {
        self.terms
            .iter()
            .fold(Operator::zeros(self.n_qubits), |acc, t| {
                &acc + &t.operator()
            })
    }
}

fn entry(p: Pauli, row: usize, col: usize) -> Complex64 {
    let i = Complex64::i();
    match (p, row, col) {
        (Pauli::I, 0, 0) | (Pauli::I, 1, 1) => C_ONE,
        (Pauli::X, 0, 1) | (Pauli::X, 1, 0) => C_ONE,
        (Pauli::Y, 0, 1) => -i,
        (Pauli::Y, 1, 0) => i,
        (Pauli::Z, 0, 0) => C_ONE,
        (Pauli::Z, 1, 1) => -C_ONE,
        _ => C_ZERO,
    }
}

/// `tr[W σ_s]` using the one-non-zero-per-row structure of Pauli strings.
fn pauli_overlap(w: &Operator, paulis: &[Pauli]) -> Complex64 {
    let n = paulis.len();
    let flip = paulis.iter().enumerate().fold(0usize, |acc, (k, p)| {
        if matches!(p, Pauli::X | Pauli::Y) {
            acc | (1 << (n - 1 - k))
        } else {
            acc
        }
    });
    (0..w.dim())
        .map(|c| {
            let r = c ^ flip;
            let sigma_cr = paulis.iter().enumerate().fold(C_ONE, |acc, (k, &p)| {
                let shift = n - 1 - k;
                acc * entry(p, (c >> shift) & 1, (r >> shift) & 1)
            });
            w[(r, c)] * sigma_cr
        })
        .sum()
}

/// Pauli expansion `c_s = tr[W σ_s]/2ⁿ` in lexicographic `I < X < Y < Z`
/// order, omitting `|c_s| < 1e-12`.
pub fn local_pauli_decomposition(w: &Operator) -> Result<LocalDecomposition> {
    w.ensure_hermitian(1e-10)?;
    let n = w.n_qubits();
    let d = w.dim() as f64;
    let mut terms = Vec::new();
    for code in 0..(1usize << (2 * n)) {
        let paulis: Vec<Pauli> = (0..n)
            .map(|k| Pauli::ALL[(code >> (2 * (n - 1 - k))) & 3])
            .collect();
        let c = pauli_overlap(w, &paulis).re / d;
        if c.abs() >= PAULI_ZERO_TOL {
            terms.push(PauliTerm {
                coefficient: c,
                paulis,
            });
        }
    }
    Ok(LocalDecomposition { n_qubits: n, terms })
}
