use num_complex::Complex64;

use super::{Operator, C_ONE, C_ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

pub fn pauli(p: Pauli) -> Operator {
    let i = Complex64::i();
    let entries = match p {
        Pauli::I => [C_ONE, C_ZERO, C_ZERO, C_ONE],
        Pauli::X => [C_ZERO, C_ONE, C_ONE, C_ZERO],
        Pauli::Y => [C_ZERO, -i, i, C_ZERO],
        Pauli::Z => [C_ONE, C_ZERO, C_ZERO, -C_ONE],
    };
    Operator::from_row_major(entries.to_vec()).expect("2x2")
}

/// Tensor product of Paulis given as a string like `"XZI"`, qubit 0 first.
pub fn pauli_string(spec: &str) -> Result<Operator> {
    let mut factors = spec.chars().map(|c| {
        Pauli::from_symbol(c)
            .map(pauli)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Pauli symbol {c:?}")))
    });
    let first = factors
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty Pauli string".into()))??;
    factors.try_fold(first, |acc, f| Ok(acc.kron(&f?)))
}
