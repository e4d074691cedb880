use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Gate;
use crate::error::{Error, Result};

/// Error rates of one physical qubit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QubitNoise {
    pub depol_1q: f64,
    pub depol_2q: f64,
    pub readout_flip: f64,
}

impl QubitNoise {
    pub fn new(depol_1q: f64, depol_2q: f64, readout_flip: f64) -> Result<Self> {
        let q = Self {
            depol_1q,
            depol_2q,
            readout_flip,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("depol_1q", self.depol_1q),
            ("depol_2q", self.depol_2q),
            ("readout_flip", self.readout_flip),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

/// Depolarizing noise after every gate plus readout bit flips in the sampler.
///
/// A gate on `k` wires is followed by one `k`-qubit depolarizing channel;
/// single-qubit gates use `depol_1q` of their wire and multi-qubit gates the
/// mean `depol_2q` of theirs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseModel {
    pub default: QubitNoise,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_wire: BTreeMap<usize, QubitNoise>,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn uniform(noise: QubitNoise) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            default: noise,
            per_wire: BTreeMap::new(),
        })
    }

    pub fn with_wire(mut self, wire: usize, noise: QubitNoise) -> Result<Self> {
        noise.validate()?;
        self.per_wire.insert(wire, noise);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.default.validate()?;
        self.per_wire.values().try_for_each(QubitNoise::validate)
    }

    pub fn wire(&self, w: usize) -> QubitNoise {
        self.per_wire.get(&w).copied().unwrap_or(self.default)
    }

    pub fn is_ideal(&self) -> bool {
        let zero = |q: &QubitNoise| q.depol_1q == 0.0 && q.depol_2q == 0.0;
        zero(&self.default) && self.per_wire.values().all(zero)
    }

    pub fn has_readout_error(&self) -> bool {
        self.default.readout_flip > 0.0 || self.per_wire.values().any(|q| q.readout_flip > 0.0)
    }

    /// Depolarizing probability applied after `gate`.
    pub fn gate_error(&self, gate: &Gate) -> f64 {
        let wires = gate.wires();
        if wires.len() == 1 {
            self.wire(wires[0]).depol_1q
        } else {
            wires.iter().map(|&w| self.wire(w).depol_2q).sum::<f64>() / wires.len() as f64
        }
    }

    /// Rates seen by logical wires, logical wire `l` sitting on physical wire
    /// `logical_to_physical[l]`.
    pub fn relabel(&self, logical_to_physical: &[usize]) -> NoiseModel {
        let per_wire = logical_to_physical
            .iter()
            .enumerate()
            .filter_map(|(l, p)| self.per_wire.get(p).map(|q| (l, *q)))
            .collect();
        NoiseModel {
            default: self.default,
            per_wire,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_probability() {
        assert!(QubitNoise::new(1.5, 0.0, 0.0).is_err());
        assert!(QubitNoise::new(0.0, -0.1, 0.0).is_err());
    }

    #[test]
    fn two_qubit_rate_is_mean() {
        let nm = NoiseModel::uniform(QubitNoise::new(0.01, 0.02, 0.0).unwrap())
            .unwrap()
            .with_wire(1, QubitNoise::new(0.0, 0.04, 0.0).unwrap())
            .unwrap();
        assert!((nm.gate_error(&Gate::Cx(0, 1)) - 0.03).abs() < 1e-15);
        assert_eq!(nm.gate_error(&Gate::H(1)), 0.0);
        assert_eq!(nm.gate_error(&Gate::H(0)), 0.01);
    }
}
