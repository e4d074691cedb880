//! Emulated cloud backend: physical qubits, their noise, and the service's
//! (untrusted) choice of which physical qubits run a job.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::circuit::NoiseModel;
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::seed::derived_rng;

/// Stream offset separating allocation draws from shot sampling.
const ALLOCATION_STREAM: u64 = 0xA110_CA7E;

/// Leftover state held by a group of physical qubits, available to an
/// adversarial allocator.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualGroup {
    pub qubits: Vec<usize>,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    physical_qubits: usize,
    noise: NoiseModel,
    residual_states: Vec<ResidualGroup>,
}

impl DeviceModel {
    pub fn new(physical_qubits: usize, noise: NoiseModel) -> Result<Self> {
        if physical_qubits == 0 {
            return Err(Error::InvalidArgument(
                "device needs at least one qubit".into(),
            ));
        }
        noise.validate()?;
        Ok(Self {
            physical_qubits,
            noise,
            residual_states: Vec::new(),
        })
    }

    pub fn noiseless(physical_qubits: usize) -> Result<Self> {
        Self::new(physical_qubits, NoiseModel::ideal())
    }

    pub fn with_residual(mut self, qubits: Vec<usize>, state: StateVector) -> Result<Self> {
        if qubits.len() != state.n_qubits() {
            return Err(Error::InvalidQubits(format!(
                "residual state on {} qubits assigned to {} physical qubits",
                state.n_qubits(),
                qubits.len()
            )));
        }
        let distinct: BTreeSet<usize> = qubits.iter().copied().collect();
        if distinct.len() != qubits.len() || qubits.iter().any(|&q| q >= self.physical_qubits) {
            return Err(Error::InvalidQubits(format!(
                "residual qubits {qubits:?} are not distinct physical qubits"
            )));
        }
        self.residual_states.push(ResidualGroup { qubits, state });
        Ok(self)
    }

    pub fn physical_qubits(&self) -> usize {
        self.physical_qubits
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn residual_states(&self) -> &[ResidualGroup] {
        &self.residual_states
    }

    /// First residual group with exactly `size` qubits.
    pub fn residual_of_size(&self, size: usize) -> Option<&ResidualGroup> {
        self.residual_states.iter().find(|g| g.qubits.len() == size)
    }
}

/// How the service maps logical wires onto physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AllocationPolicy {
    Identity,
    /// Logical wire `l` runs on physical qubit `perm[l]`.
    FixedPermutation {
        perm: Vec<usize>,
    },
    /// A fresh uniformly random placement for every job.
    FreshRandomPerJob,
    /// Places plain jobs in reverse order. For prepare-measure jobs whose id
    /// is listed, the measurement stage runs on a residual qubit group
    /// instead of on the prepared qubits.
    AdversarialSplit {
        reroute_jobs: BTreeSet<u64>,
    },
}

impl AllocationPolicy {
    pub fn adversarial() -> Self {
        AllocationPolicy::AdversarialSplit {
            reroute_jobs: BTreeSet::from([1]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let AllocationPolicy::FixedPermutation { perm } = self {
            let mut seen = vec![false; perm.len()];
            for &p in perm {
                if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidArgument(format!(
                        "{perm:?} is not a permutation of 0..{}",
                        perm.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn reroutes(&self, job_id: u64) -> bool {
        matches!(self, AllocationPolicy::AdversarialSplit { reroute_jobs } if reroute_jobs.contains(&job_id))
    }

    /// Logical-to-physical map for a `width`-wire job.
    pub fn allocate(
        &self,
        width: usize,
        device: &DeviceModel,
        seed: u64,
        job_id: u64,
    ) -> Result<Vec<usize>> {
        self.validate()?;
        let available = device.physical_qubits();
        if width > available {
            return Err(Error::InsufficientQubits {
                needed: width,
                available,
            });
        }
        Ok(match self {
            AllocationPolicy::Identity => (0..width).collect(),
            AllocationPolicy::FixedPermutation { perm } => {
                if perm.len() != available {
                    return Err(Error::InvalidArgument(format!(
                        "permutation of {} qubits for a {available}-qubit device",
                        perm.len()
                    )));
                }
                perm[..width].to_vec()
            }
            AllocationPolicy::FreshRandomPerJob => {
                let mut rng = derived_rng(seed ^ ALLOCATION_STREAM, job_id);
                let mut all: Vec<usize> = (0..available).collect();
                all.shuffle(&mut rng);
                all.truncate(width);
                all
            }
            AllocationPolicy::AdversarialSplit { .. } => {
                (0..width).map(|l| available - 1 - l).collect()
            }
        })
    }
}

impl fmt::Display for AllocationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AllocationPolicy::Identity => f.write_str("identity"),
            AllocationPolicy::FixedPermutation { perm } => {
                let list: Vec<String> = perm.iter().map(usize::to_string).collect();
                write!(f, "perm:{}", list.join(","))
            }
            AllocationPolicy::FreshRandomPerJob => f.write_str("random"),
            AllocationPolicy::AdversarialSplit { .. } => f.write_str("adversarial"),
        }
    }
}

impl FromStr for AllocationPolicy {
    type Err = Error;

    /// `identity`, `perm:<p0>,<p1>,…`, `random` or `adversarial`.
    fn from_str(s: &str) -> Result<Self> {
        let policy = match s {
            "identity" => AllocationPolicy::Identity,
            "random" | "fresh_random_per_job" => AllocationPolicy::FreshRandomPerJob,
            "adversarial" | "adversarial_split" => AllocationPolicy::adversarial(),
            other => {
                let Some(list) = other.strip_prefix("perm:") else {
                    return Err(Error::InvalidArgument(format!(
                        "unknown allocation policy {other:?}"
                    )));
                };
                let perm = list
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<usize>().map_err(|_| {
                            Error::InvalidArgument(format!("bad permutation entry {p:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                AllocationPolicy::FixedPermutation { perm }
            }
        };
        policy.validate()?;
        Ok(policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_policies() {
        assert_eq!(
            "identity".parse::<AllocationPolicy>().unwrap(),
            AllocationPolicy::Identity
        );
        assert_eq!(
            "perm:2,0,1".parse::<AllocationPolicy>().unwrap(),
            AllocationPolicy::FixedPermutation {
                perm: vec![2, 0, 1]
            }
        );
        assert!("perm:0,0".parse::<AllocationPolicy>().is_err());
        assert!("perm:0,x".parse::<AllocationPolicy>().is_err());
        assert!("greedy".parse::<AllocationPolicy>().is_err());
        for s in ["identity", "perm:1,0", "random", "adversarial"] {
            assert_eq!(s.parse::<AllocationPolicy>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn random_allocation_is_deterministic_injection() {
        let dev = DeviceModel::noiseless(8).unwrap();
        let p = AllocationPolicy::FreshRandomPerJob;
        let a = p.allocate(5, &dev, 3, 7).unwrap();
        assert_eq!(a, p.allocate(5, &dev, 3, 7).unwrap());
        let distinct: BTreeSet<usize> = a.iter().copied().collect();
        assert_eq!(distinct.len(), 5);
        assert!(a.iter().all(|&q| q < 8));
    }

    #[test]
    fn insufficient_qubits() {
        let dev = DeviceModel::noiseless(2).unwrap();
        assert!(matches!(
            AllocationPolicy::Identity.allocate(3, &dev, 0, 0),
            Err(Error::InsufficientQubits {
                needed: 3,
                available: 2
            })
        ));
    }
}
