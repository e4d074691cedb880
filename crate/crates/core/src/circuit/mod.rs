//! Gate-list circuits over numbered wires.
//!
//! Wire 0 is the most significant qubit of every simulated basis index. A
//! circuit acts on `|0…0⟩` and is measured on all wires in the computational
//! basis at the end.

mod catalog;
mod noise;
mod parse;
mod purify;
mod sim;
mod synth;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;

pub use catalog::{catalog_circuit, catalog_density, CatalogFamily, Preparation};
pub use noise::{NoiseModel, QubitNoise};
pub use parse::parse_circuit;
pub use purify::{purification_circuit, purification_state};
pub use sim::{apply_circuit, simulate_density, simulate_density_from, simulate_statevector};
pub use synth::{
    controlled_u_decompose, diagonalizing_circuit, ry_angle, synthesize_state_prep, zyz_angles,
};

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector, C_ONE, C_ZERO};

/// Widest register the simulators accept.
pub const MAX_WIDTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cx(usize, usize),
    Ccx(usize, usize, usize),
    /// Controlled `e^{iα} R_z(β) R_y(γ) R_z(δ)`.
    Cu {
        control: usize,
        target: usize,
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
    },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn rz_matrix(theta: f64) -> [Complex64; 4] {
    [
        Complex64::from_polar(1.0, -theta / 2.0),
        C_ZERO,
        C_ZERO,
        Complex64::from_polar(1.0, theta / 2.0),
    ]
}

pub(crate) fn ry_matrix(theta: f64) -> [Complex64; 4] {
    let (s, co) = (theta / 2.0).sin_cos();
    [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
}

fn rx_matrix(theta: f64) -> [Complex64; 4] {
    let (s, co) = (theta / 2.0).sin_cos();
    [c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
}

fn mul2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// `e^{iα} R_z(β) R_y(γ) R_z(δ)` as a row-major 2×2 matrix.
pub(crate) fn zyz_matrix(alpha: f64, beta: f64, gamma: f64, delta: f64) -> [Complex64; 4] {
    let m = mul2(
        &mul2(&rz_matrix(beta), &ry_matrix(gamma)),
        &rz_matrix(delta),
    );
    let ph = Complex64::from_polar(1.0, alpha);
    m.map(|x| ph * x)
}

impl Gate {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::Rx(..) => "rx",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::Cx(..) => "cx",
            Gate::Ccx(..) => "ccx",
            Gate::Cu { .. } => "cu",
        }
    }

    /// Wires in matrix order: controls first, target last.
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::H(w) | Gate::X(w) | Gate::Y(w) | Gate::Z(w) => vec![w],
            Gate::Rx(w, _) | Gate::Ry(w, _) | Gate::Rz(w, _) => vec![w],
            Gate::Cx(a, b) => vec![a, b],
            Gate::Cu {
                control, target, ..
            } => vec![control, target],
            Gate::Ccx(a, b, t) => vec![a, b, t],
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) => vec![t],
            Gate::Cu {
                alpha,
                beta,
                gamma,
                delta,
                ..
            } => vec![alpha, beta, gamma, delta],
            _ => Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.wires().len()
    }

    /// Unitary on [`Gate::wires`], first wire most significant.
    pub fn matrix(&self) -> Operator {
        let i = Complex64::i();
        let h = FRAC_1_SQRT_2;
        let single = |m: [Complex64; 4]| Operator::from_row_major(m.to_vec()).expect("2x2");
        match *self {
            Gate::H(_) => single([c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]),
            Gate::X(_) => single([C_ZERO, C_ONE, C_ONE, C_ZERO]),
            Gate::Y(_) => single([C_ZERO, -i, i, C_ZERO]),
            Gate::Z(_) => single([C_ONE, C_ZERO, C_ZERO, -C_ONE]),
            Gate::Rx(_, t) => single(rx_matrix(t)),
            Gate::Ry(_, t) => single(ry_matrix(t)),
            Gate::Rz(_, t) => single(rz_matrix(t)),
            Gate::Cx(..) => controlled(1, [C_ZERO, C_ONE, C_ONE, C_ZERO]),
            Gate::Ccx(..) => controlled(2, [C_ZERO, C_ONE, C_ONE, C_ZERO]),
            Gate::Cu {
                alpha,
                beta,
                gamma,
                delta,
                ..
            } => controlled(1, zyz_matrix(alpha, beta, gamma, delta)),
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rx(w, t) => Gate::Rx(w, -t),
            Gate::Ry(w, t) => Gate::Ry(w, -t),
            Gate::Rz(w, t) => Gate::Rz(w, -t),
            Gate::Cu {
                control,
                target,
                alpha,
                beta,
                gamma,
                delta,
            } => Gate::Cu {
                control,
                target,
                alpha: -alpha,
                beta: -delta,
                gamma: -gamma,
                delta: -beta,
            },
            g => g,
        }
    }

    /// Same gate with every wire `w` replaced by `map(w)`.
    pub fn map_wires(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(w) => Gate::H(map(w)),
            Gate::X(w) => Gate::X(map(w)),
            Gate::Y(w) => Gate::Y(map(w)),
            Gate::Z(w) => Gate::Z(map(w)),
            Gate::Rx(w, t) => Gate::Rx(map(w), t),
            Gate::Ry(w, t) => Gate::Ry(map(w), t),
            Gate::Rz(w, t) => Gate::Rz(map(w), t),
            Gate::Cx(a, b) => Gate::Cx(map(a), map(b)),
            Gate::Ccx(a, b, t) => Gate::Ccx(map(a), map(b), map(t)),
            Gate::Cu {
                control,
                target,
                alpha,
                beta,
                gamma,
                delta,
            } => Gate::Cu {
                control: map(control),
                target: map(target),
                alpha,
                beta,
                gamma,
                delta,
            },
        }
    }

    fn validate(&self, width: usize) -> Result<()> {
        let wires = self.wires();
        for (k, &w) in wires.iter().enumerate() {
            if w >= width {
                return Err(Error::InvalidCircuit(format!(
                    "{} wire {w} out of range for width {width}",
                    self.mnemonic()
                )));
            }
            if wires[..k].contains(&w) {
                return Err(Error::InvalidCircuit(format!(
                    "{} uses wire {w} twice",
                    self.mnemonic()
                )));
            }
        }
        if self.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCircuit(format!(
                "{} has a non-finite angle",
                self.mnemonic()
            )));
        }
        Ok(())
    }
}

/// Block-diagonal `diag(I, …, I, u)` with `n_controls` leading control qubits.
fn controlled(n_controls: usize, u: [Complex64; 4]) -> Operator {
    let n = n_controls + 1;
    let d = 1usize << n;
    let mut m = Operator::identity(n);
    let base = d - 2;
    m[(base, base)] = u[0];
    m[(base, base + 1)] = u[1];
    m[(base + 1, base)] = u[2];
    m[(base + 1, base + 1)] = u[3];
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    name: String,
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidCircuit(format!(
                "width {width} is outside 1..={MAX_WIDTH}"
            )));
        }
        Ok(Self {
            name: String::new(),
            width,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width > self.width {
            return Err(Error::InvalidCircuit(format!(
                "cannot append a width-{} circuit to width {}",
                other.width, self.width
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            name: self.name.clone(),
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Places wire `w` of `self` on wire `mapping[w]` of a `width`-wire circuit.
    pub fn remap(&self, mapping: &[usize], width: usize) -> Result<Circuit> {
        if mapping.len() != self.width {
            return Err(Error::InvalidCircuit(format!(
                "mapping has {} entries for a width-{} circuit",
                mapping.len(),
                self.width
            )));
        }
        let mapped = self.gates.iter().map(|g| g.map_wires(|w| mapping[w]));
        Ok(Circuit::from_gates(width, mapped)?.with_name(self.name.clone()))
    }

    pub fn count_multi_qubit(&self) -> usize {
        self.gates.iter().filter(|g| g.arity() > 1).count()
    }

    /// Text in the gate-list format accepted by [`parse_circuit`].
    pub fn render(&self) -> String {
        let mut out = format!("qubits {}\n", self.width);
        for g in &self.gates {
            out.push_str(g.mnemonic());
            for w in g.wires() {
                write!(out, " {w}").unwrap();
            }
            for p in g.params() {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Full `2^width`-dimensional unitary; column `j` is the circuit applied
    /// to basis state `j`.
    pub fn unitary(&self) -> Operator {
        let d = 1usize << self.width;
        let mut u = Operator::zeros(self.width);
        for j in 0..d {
            let mut psi = StateVector::basis(self.width, j).expect("index in range");
            apply_circuit(self, &mut psi).expect("width matches");
            for (r, a) in psi.amplitudes().iter().enumerate() {
                u[(r, j)] = *a;
            }
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_wires() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(Gate::Cx(0, 0)).is_err());
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c.push(Gate::Rz(0, f64::NAN)).is_err());
        assert!(Circuit::new(MAX_WIDTH + 1).is_err());
    }

    #[test]
    fn inverse_undoes_circuit() {
        let c = Circuit::from_gates(
            2,
            [
                Gate::H(0),
                Gate::Rx(1, 0.3),
                Gate::Cu {
                    control: 1,
                    target: 0,
                    alpha: 0.2,
                    beta: -0.7,
                    gamma: 1.1,
                    delta: 0.4,
                },
                Gate::Cx(0, 1),
            ],
        )
        .unwrap();
        let mut full = c.clone();
        full.append(&c.inverse()).unwrap();
        assert!(full.unitary().max_abs_diff(&Operator::identity(2)) < 1e-12);
    }

    #[test]
    fn remap_moves_wires() {
        let c = Circuit::from_gates(2, [Gate::X(0)]).unwrap();
        let r = c.remap(&[2, 0], 3).unwrap();
        assert_eq!(r.gates(), &[Gate::X(2)]);
    }
}
