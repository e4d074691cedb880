//! Test preparations: states 1 to 7 of the two- and three-qubit series.
//! States 1 and 7 are entangled; the rest are separable, and the mixed ones
//! are purified with one ancilla wire placed after the system wires.

use std::fmt;
use std::str::FromStr;

use super::{ry_angle, Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{bell, DensityMatrix, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogFamily {
    TwoQubit,
    ThreeQubit,
}

impl CatalogFamily {
    pub fn n_qubits(self) -> usize {
        match self {
            CatalogFamily::TwoQubit => 2,
            CatalogFamily::ThreeQubit => 3,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CatalogFamily::TwoQubit => "2q",
            CatalogFamily::ThreeQubit => "3q",
        }
    }
}

impl fmt::Display for CatalogFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CatalogFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2q" => Ok(CatalogFamily::TwoQubit),
            "3q" => Ok(CatalogFamily::ThreeQubit),
            other => Err(Error::InvalidArgument(format!(
                "unknown catalog family {other:?} (expected 2q or 3q)"
            ))),
        }
    }
}

/// A state-preparation circuit whose first `system_qubits` wires carry the
/// prepared state; any further wires are purification ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub circuit: Circuit,
    pub system_qubits: usize,
}

impl Preparation {
    pub fn new(circuit: Circuit, system_qubits: usize) -> Result<Self> {
        if system_qubits == 0 || system_qubits > circuit.width() {
            return Err(Error::InvalidArgument(format!(
                "{system_qubits} system qubits for a width-{} circuit",
                circuit.width()
            )));
        }
        Ok(Self {
            circuit,
            system_qubits,
        })
    }

    pub fn ancillas(&self) -> usize {
        self.circuit.width() - self.system_qubits
    }
}

fn check_id(state_id: usize) -> Result<()> {
    if !(1..=7).contains(&state_id) {
        return Err(Error::InvalidArgument(format!(
            "catalog state id {state_id} is outside 1..=7"
        )));
    }
    Ok(())
}

fn ry_to(a0: f64, a1: f64) -> f64 {
    ry_angle(a0.sqrt(), a1.sqrt()).expect("catalog weights are normalized")
}

fn two_qubit(state_id: usize) -> (usize, Vec<Gate>) {
    match state_id {
        1 => (2, vec![Gate::H(0), Gate::Cx(0, 1)]),
        2 => (2, vec![]),
        // √w₀|00⟩|0⟩ + √w₁|01⟩|1⟩ with the ancilla on wire 2.
        3 => (3, vec![Gate::Ry(2, ry_to(0.75, 0.25)), Gate::Cx(2, 1)]),
        4 => (3, vec![Gate::H(2), Gate::Cx(2, 1)]),
        5 => (3, vec![Gate::Ry(2, ry_to(0.25, 0.75)), Gate::Cx(2, 1)]),
        6 => (2, vec![Gate::X(1)]),
        7 => (2, vec![Gate::X(0), Gate::H(0), Gate::Cx(0, 1), Gate::X(1)]),
        _ => unreachable!("id checked"),
    }
}

fn three_qubit(state_id: usize) -> (usize, Vec<Gate>) {
    match state_id {
        1 => (3, vec![Gate::H(0), Gate::Cx(0, 1), Gate::Ccx(0, 1, 2)]),
        2 => (3, vec![]),
        3 => (4, vec![Gate::H(3), Gate::Cx(3, 2)]),
        4 => (3, vec![Gate::X(2)]),
        // (|001⟩|0⟩ + |010⟩|1⟩)/√2
        5 => (
            4,
            vec![Gate::H(3), Gate::Cx(3, 1), Gate::X(2), Gate::Cx(3, 2)],
        ),
        6 => (3, vec![Gate::X(1)]),
        7 => (
            3,
            vec![
                Gate::X(0),
                Gate::H(0),
                Gate::Cx(0, 1),
                Gate::Ccx(0, 1, 2),
                Gate::X(1),
            ],
        ),
        _ => unreachable!("id checked"),
    }
}

pub fn catalog_circuit(family: CatalogFamily, state_id: usize) -> Result<Preparation> {
    check_id(state_id)?;
    let (width, gates) = match family {
        CatalogFamily::TwoQubit => two_qubit(state_id),
        CatalogFamily::ThreeQubit => three_qubit(state_id),
    };
    let circuit = Circuit::from_gates(width, gates)?
        .with_name(format!("catalog:{}/{state_id}", family.tag()));
    Preparation::new(circuit, family.n_qubits())
}

fn basis_mixture(n: usize, parts: &[(f64, usize)]) -> DensityMatrix {
    let parts: Vec<(f64, DensityMatrix)> = parts
        .iter()
        .map(|&(w, idx)| (w, DensityMatrix::pure(&StateVector::basis(n, idx).unwrap())))
        .collect();
    DensityMatrix::mixture(&parts).expect("weights sum to one")
}

/// The catalog state as defined, built without any circuit.
pub fn catalog_density(family: CatalogFamily, state_id: usize) -> Result<DensityMatrix> {
    check_id(state_id)?;
    Ok(match (family, state_id) {
        (CatalogFamily::TwoQubit, 1) => DensityMatrix::pure(&bell::phi_plus()),
        (CatalogFamily::TwoQubit, 2) => basis_mixture(2, &[(1.0, 0b00)]),
        (CatalogFamily::TwoQubit, 3) => basis_mixture(2, &[(0.75, 0b00), (0.25, 0b01)]),
        (CatalogFamily::TwoQubit, 4) => basis_mixture(2, &[(0.5, 0b00), (0.5, 0b01)]),
        (CatalogFamily::TwoQubit, 5) => basis_mixture(2, &[(0.25, 0b00), (0.75, 0b01)]),
        (CatalogFamily::TwoQubit, 6) => basis_mixture(2, &[(1.0, 0b01)]),
        (CatalogFamily::TwoQubit, _) => DensityMatrix::pure(&bell::psi_minus()),
        (CatalogFamily::ThreeQubit, 1) => DensityMatrix::pure(&bell::ghz_family(&[0, 0, 0], true)),
        (CatalogFamily::ThreeQubit, 2) => basis_mixture(3, &[(1.0, 0b000)]),
        (CatalogFamily::ThreeQubit, 3) => basis_mixture(3, &[(0.5, 0b000), (0.5, 0b001)]),
        (CatalogFamily::ThreeQubit, 4) => basis_mixture(3, &[(1.0, 0b001)]),
        (CatalogFamily::ThreeQubit, 5) => basis_mixture(3, &[(0.5, 0b001), (0.5, 0b010)]),
        (CatalogFamily::ThreeQubit, 6) => basis_mixture(3, &[(1.0, 0b010)]),
        (CatalogFamily::ThreeQubit, _) => DensityMatrix::pure(&bell::ghz_family(&[0, 1, 0], false)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{simulate_density, simulate_statevector, NoiseModel};

    #[test]
    fn circuits_match_definitions() {
        for family in [CatalogFamily::TwoQubit, CatalogFamily::ThreeQubit] {
            for id in 1..=7 {
                let prep = catalog_circuit(family, id).unwrap();
                let psi = simulate_statevector(&prep.circuit);
                let system: Vec<usize> = (0..prep.system_qubits).collect();
                let rho = DensityMatrix::pure(&psi).partial_trace(&system).unwrap();
                let want = catalog_density(family, id).unwrap();
                assert!(
                    rho.as_operator().max_abs_diff(want.as_operator()) < 1e-10,
                    "{family} state {id}"
                );
                let noiseless = simulate_density(&prep.circuit, &NoiseModel::ideal()).unwrap();
                assert!(noiseless.as_operator().max_abs_diff(&psi.projector()) < 1e-10);
            }
        }
    }

    #[test]
    fn ancilla_counts() {
        let anc = |f, id| catalog_circuit(f, id).unwrap().ancillas();
        assert_eq!(
            (1..=7)
                .map(|i| anc(CatalogFamily::TwoQubit, i))
                .collect::<Vec<_>>(),
            vec![0, 0, 1, 1, 1, 0, 0]
        );
        assert_eq!(
            (1..=7)
                .map(|i| anc(CatalogFamily::ThreeQubit, i))
                .collect::<Vec<_>>(),
            vec![0, 0, 1, 0, 1, 0, 0]
        );
    }

    #[test]
    fn invalid_ids() {
        assert!(catalog_circuit(CatalogFamily::TwoQubit, 0).is_err());
        assert!(catalog_circuit(CatalogFamily::ThreeQubit, 8).is_err());
        assert!("4q".parse::<CatalogFamily>().is_err());
    }
}
