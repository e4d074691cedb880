//! Entanglement-witnessing circuits appended to a preparation.
//!
//! Scheme 1 runs the inverse purification of `W̃` on the system and an
//! ancilla register that is maximally mixed through a reference register:
//!
//! ```text
//! p(0…0 on S,A) = tr[|W̃⟩⟨W̃| (ρ_S ⊗ I_A/2ⁿ)] = tr[W̃ ρ_S] / 2ⁿ
//! ```
//!
//! Scheme 2 prepares the purification of `W̃ᵀ` next to the system and
//! projects every pair `(k, k+n)` onto `|φ⁺⟩`:
//!
//! ```text
//! p(0…0 on S,S′) = tr[ρ_S W̃] / 2ⁿ
//! ```

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{purification_circuit, simulate_statevector, Circuit, Gate, Preparation};
use crate::error::{Error, Result};
use crate::witness::WitnessBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "split_pm")]
    SplitPm,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::One => "1",
            Scheme::Two => "2",
            Scheme::SplitPm => "split_pm",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Scheme::One),
            "2" => Ok(Scheme::Two),
            "split_pm" | "pm" => Ok(Scheme::SplitPm),
            other => Err(Error::InvalidArgument(format!(
                "unknown scheme {other:?} (expected 1 or 2)"
            ))),
        }
    }
}

/// A preparation followed by its witnessing stage.
#[derive(Debug, Clone, PartialEq)]
pub struct EwcCircuit {
    pub circuit: Circuit,
    /// Wires whose joint all-zero outcome is counted.
    pub readout_wires: Vec<usize>,
    /// `tr[W̃ρ] = scale · p(readout all 0)`.
    pub scale: f64,
    /// Gate indices that belong to the preparation.
    pub prep_gates: Range<usize>,
}

impl EwcCircuit {
    /// `scale · p(0…0)` computed from the exact output state.
    pub fn ideal_estimate(&self) -> f64 {
        let psi = simulate_statevector(&self.circuit);
        let w = self.circuit.width();
        let mask: usize = self
            .readout_wires
            .iter()
            .map(|&r| 1usize << (w - 1 - r))
            .sum();
        let p0: f64 = psi
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, p)| p)
            .sum();
        self.scale * p0
    }
}

fn check_width(prep: &Preparation, bundle: &WitnessBundle) -> Result<usize> {
    let n = bundle.n_qubits;
    if prep.system_qubits != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: prep.system_qubits,
        });
    }
    Ok(n)
}

/// Places the preparation's system wires at `0..n` and its ancillas from
/// `spectator_base` on.
fn place_prep(prep: &Preparation, spectator_base: usize, width: usize) -> Result<Circuit> {
    let n = prep.system_qubits;
    let mapping: Vec<usize> = (0..prep.circuit.width())
        .map(|w| if w < n { w } else { spectator_base + (w - n) })
        .collect();
    prep.circuit.remap(&mapping, width)
}

/// Layout: system `0..n`, ancilla `n..2n`, reference `2n..3n`, then the
/// preparation's own ancillas.
pub fn scheme1_assemble(prep: &Preparation, bundle: &WitnessBundle) -> Result<EwcCircuit> {
    let n = check_width(prep, bundle)?;
    let width = 3 * n + prep.ancillas();
    let mut c = place_prep(prep, 3 * n, width)?;
    let prep_gates = 0..c.len();
    for k in 0..n {
        c.push(Gate::H(n + k))?;
        c.push(Gate::Cx(n + k, 2 * n + k))?;
    }
    let ewc = purification_circuit(&bundle.w_tilde)?.inverse();
    c.append(&ewc.remap(&(0..2 * n).collect::<Vec<_>>(), width)?)?;
    Ok(EwcCircuit {
        circuit: c.with_name(format!("scheme1:{}", prep.circuit.name())),
        readout_wires: (0..2 * n).collect(),
        scale: (1u64 << n) as f64,
        prep_gates,
    })
}

/// Layout: system `0..n`, copy `n..2n`, purification ancilla `2n..3n`, then
/// the preparation's own ancillas.
pub fn scheme2_assemble(prep: &Preparation, bundle: &WitnessBundle) -> Result<EwcCircuit> {
    let n = check_width(prep, bundle)?;
    let width = 3 * n + prep.ancillas();
    let mut c = place_prep(prep, 3 * n, width)?;
    let prep_gates = 0..c.len();
    let pur = purification_circuit(&bundle.w_tilde.transpose())?;
    c.append(&pur.remap(&(n..3 * n).collect::<Vec<_>>(), width)?)?;
    for k in 0..n {
        c.push(Gate::Cx(k, k + n))?;
        c.push(Gate::H(k))?;
    }
    Ok(EwcCircuit {
        circuit: c.with_name(format!("scheme2:{}", prep.circuit.name())),
        readout_wires: (0..2 * n).collect(),
        scale: (1u64 << n) as f64,
        prep_gates,
    })
}

pub fn assemble(scheme: Scheme, prep: &Preparation, bundle: &WitnessBundle) -> Result<EwcCircuit> {
    match scheme {
        Scheme::One => scheme1_assemble(prep, bundle),
        Scheme::Two => scheme2_assemble(prep, bundle),
        Scheme::SplitPm => Err(Error::InvalidArgument(
            "the split estimator has no single witnessing circuit".into(),
        )),
    }
}
