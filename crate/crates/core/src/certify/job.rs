use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::device::{AllocationPolicy, DeviceModel};
use crate::circuit::{apply_circuit, parse_circuit, simulate_density_from, Circuit, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, StateVector};
use crate::seed::derived_rng;

/// Where a job's qubits came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationRecord {
    pub job_id: u64,
    /// Physical qubit of every logical wire.
    pub logical_to_physical: Vec<usize>,
    /// The measurement stage ran on a residual qubit group.
    pub rerouted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobResult {
    pub shots: u64,
    pub seed: u64,
    pub allocation: AllocationRecord,
    /// Outcome counts keyed by bitstring, logical wire 0 first.
    pub counts: BTreeMap<String, u64>,
}

impl JobResult {
    /// Counts keyed by bitstrings over all physical qubits, qubit 0 first;
    /// qubits the job did not use read `0`.
    pub fn physical_counts(&self, physical_qubits: usize) -> BTreeMap<String, u64> {
        let map = &self.allocation.logical_to_physical;
        self.counts
            .iter()
            .map(|(bits, &n)| {
                let mut phys = vec![b'0'; physical_qubits];
                for (l, b) in bits.bytes().enumerate() {
                    phys[map[l]] = b;
                }
                (String::from_utf8(phys).expect("ascii"), n)
            })
            .collect()
    }

    /// Fraction of shots whose bits on `wires` are all zero.
    pub fn zero_fraction(&self, wires: &[usize]) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .filter(|(bits, _)| wires.iter().all(|&w| bits.as_bytes()[w] == b'0'))
            .map(|(_, &n)| n)
            .sum();
        hits as f64 / self.shots as f64
    }

    /// Fraction of shots with outcome `index` (wire 0 most significant).
    pub fn outcome_fraction(&self, index: usize) -> f64 {
        let width = self.allocation.logical_to_physical.len();
        let key = bitstring(index, width);
        self.counts.get(&key).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}

pub(crate) fn bitstring(index: usize, width: usize) -> String {
    (0..width)
        .map(|w| {
            if (index >> (width - 1 - w)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Exact outcome distribution of `circuit` run on `initial` when only the
/// first `noisy_gates` gates suffer depolarizing noise.
pub(crate) fn outcome_distribution(
    circuit: &Circuit,
    initial: StateVector,
    noise: &NoiseModel,
    noisy_gates: usize,
) -> Result<Vec<f64>> {
    let noisy_gates = noisy_gates.min(circuit.len());
    if noise.is_ideal() || noisy_gates == 0 {
        let mut psi = initial;
        apply_circuit(circuit, &mut psi)?;
        return Ok(psi.probabilities());
    }
    let head = Circuit::from_gates(
        circuit.width(),
        circuit.gates()[..noisy_gates].iter().copied(),
    )?;
    let tail = Circuit::from_gates(
        circuit.width(),
        circuit.gates()[noisy_gates..].iter().copied(),
    )?;
    let rho = simulate_density_from(&head, &DensityMatrix::pure(&initial), noise)?;
    let rho = simulate_density_from(&tail, &rho, &NoiseModel::ideal())?;
    Ok(rho.diagonal().into_iter().map(|p| p.max(0.0)).collect())
}

/// Independent classical bit flips on each wire.
pub(crate) fn apply_readout(probs: &mut [f64], flips: &[f64]) {
    let n = flips.len();
    for (w, &f) in flips.iter().enumerate() {
        if f == 0.0 {
            continue;
        }
        let bit = 1usize << (n - 1 - w);
        for i in 0..probs.len() {
            if i & bit == 0 {
                let (a, b) = (probs[i], probs[i | bit]);
                probs[i] = (1.0 - f) * a + f * b;
                probs[i | bit] = (1.0 - f) * b + f * a;
            }
        }
    }
}

/// Multinomial draw by sequential binomials.
pub(crate) fn sample_counts<R: Rng + ?Sized>(
    probs: &[f64],
    shots: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    let mut out = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let k = if i + 1 == probs.len() || mass <= p {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            let ratio = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, ratio)
                .map_err(|e| Error::Tolerance(format!("binomial draw: {e}")))?
                .sample(rng)
        };
        out[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(out)
}

struct Execution<'a> {
    circuit: &'a Circuit,
    initial: StateVector,
    noisy_gates: usize,
    allocation: AllocationRecord,
}

fn execute(job: Execution<'_>, shots: u64, seed: u64, device: &DeviceModel) -> Result<JobResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument(
            "a job needs at least one shot".into(),
        ));
    }
    let noise = device.noise().relabel(&job.allocation.logical_to_physical);
    let mut probs = outcome_distribution(job.circuit, job.initial, &noise, job.noisy_gates)?;
    let flips: Vec<f64> = (0..job.circuit.width())
        .map(|l| noise.wire(l).readout_flip)
        .collect();
    apply_readout(&mut probs, &flips);
    let mut rng = derived_rng(seed, job.allocation.job_id);
    let draws = sample_counts(&probs, shots, &mut rng)?;
    let width = job.circuit.width();
    let counts = draws
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(i, &n)| (bitstring(i, width), n))
        .collect();
    Ok(JobResult {
        shots,
        seed,
        allocation: job.allocation,
        counts,
    })
}

/// Runs one circuit as job `job_id`. Counts come back in logical wire order;
/// the allocation trace records where each wire ran.
pub fn run_job_with_id(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    device: &DeviceModel,
    policy: &AllocationPolicy,
    job_id: u64,
) -> Result<JobResult> {
    run_job_scoped(circuit, circuit.len(), shots, seed, device, policy, job_id)
}

/// As [`run_job_with_id`] with noise limited to the first `noisy_gates` gates.
pub fn run_job_scoped(
    circuit: &Circuit,
    noisy_gates: usize,
    shots: u64,
    seed: u64,
    device: &DeviceModel,
    policy: &AllocationPolicy,
    job_id: u64,
) -> Result<JobResult> {
    let map = policy.allocate(circuit.width(), device, seed, job_id)?;
    execute(
        Execution {
            circuit,
            initial: StateVector::zero_state(circuit.width()),
            noisy_gates,
            allocation: AllocationRecord {
                job_id,
                logical_to_physical: map,
                rerouted: false,
            },
        },
        shots,
        seed,
        device,
    )
}

pub fn run_job(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    device: &DeviceModel,
    policy: &AllocationPolicy,
) -> Result<JobResult> {
    run_job_with_id(circuit, shots, seed, device, policy, 0)
}

/// Runs `prep` followed by `measure` (acting on the leading wires) as a job
/// that the service executes in two stages. Gate noise acts on the
/// preparation stage only.
///
/// An adversarial allocator that reroutes `job_id` runs the measurement
/// stage on a residual qubit group of matching size, so the prepared state
/// never reaches the measurement.
pub fn run_prepare_measure(
    prep: &Circuit,
    measure: &Circuit,
    job_id: u64,
    shots: u64,
    seed: u64,
    device: &DeviceModel,
    policy: &AllocationPolicy,
) -> Result<JobResult> {
    let m = measure.width();
    if m > prep.width() {
        return Err(Error::InvalidCircuit(format!(
            "measurement on {m} wires after a width-{} preparation",
            prep.width()
        )));
    }
    let width = prep.width();
    let widened = measure.remap(&(0..m).collect::<Vec<_>>(), width)?;
    if policy.reroutes(job_id) {
        let group = device.residual_of_size(m).ok_or_else(|| {
            Error::InvalidArgument(format!("no residual group of {m} qubits to reroute to"))
        })?;
        let mut map = group.qubits.clone();
        let used: Vec<usize> = map.clone();
        map.extend(
            (0..device.physical_qubits())
                .filter(|q| !used.contains(q))
                .take(width - m),
        );
        if map.len() < width {
            return Err(Error::InsufficientQubits {
                needed: width,
                available: device.physical_qubits(),
            });
        }
        let rest = StateVector::zero_state(width - m);
        let initial = if width > m {
            group.state.kron(&rest)
        } else {
            group.state.clone()
        };
        return execute(
            Execution {
                circuit: &widened,
                initial,
                noisy_gates: 0,
                allocation: AllocationRecord {
                    job_id,
                    logical_to_physical: map,
                    rerouted: true,
                },
            },
            shots,
            seed,
            device,
        );
    }
    let mut full = prep.clone();
    full.append(&widened)?;
    run_job_scoped(&full, prep.len(), shots, seed, device, policy, job_id)
}

/// Serialized device description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    pub qubits: usize,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual_states: Vec<ResidualSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSpec {
    pub qubits: Vec<usize>,
    /// Amplitudes as `[re, im]` pairs.
    pub amplitudes: Vec<[f64; 2]>,
}

impl DeviceSpec {
    pub fn build(&self) -> Result<DeviceModel> {
        let mut dev = DeviceModel::new(self.qubits, self.noise.clone())?;
        for r in &self.residual_states {
            let amps = r
                .amplitudes
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            dev = dev.with_residual(r.qubits.clone(), StateVector::new(amps)?)?;
        }
        Ok(dev)
    }
}

/// Job submission document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobFile {
    /// Circuit in the gate-list text format.
    pub circuit: String,
    pub shots: u64,
    pub seed: u64,
    pub device: DeviceSpec,
    pub policy: AllocationPolicy,
    #[serde(default)]
    pub job_id: u64,
}

impl JobFile {
    pub fn run(&self) -> Result<JobResult> {
        let circuit = parse_circuit(&self.circuit)?;
        let device = self.device.build()?;
        run_job_with_id(
            &circuit,
            self.shots,
            self.seed,
            &device,
            &self.policy,
            self.job_id,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QubitNoise};
    use crate::linalg::bell;
    use crate::seed::rng_from_seed;

    fn bell_prep() -> Circuit {
        Circuit::from_gates(2, [Gate::H(0), Gate::Cx(0, 1)]).unwrap()
    }

    #[test]
    fn counts_sum_to_shots_and_are_deterministic() {
        let dev = DeviceModel::noiseless(2).unwrap();
        let r = run_job(&bell_prep(), 8192, 1, &dev, &AllocationPolicy::Identity).unwrap();
        assert_eq!(r.counts.values().sum::<u64>(), 8192);
        assert!(r.counts.keys().all(|k| k == "00" || k == "11"));
        let f = r.counts["00"] as f64 / 8192.0;
        assert!((f - 0.5).abs() <= 5.0 * (0.25f64 / 8192.0).sqrt());
        let again = run_job(&bell_prep(), 8192, 1, &dev, &AllocationPolicy::Identity).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn readout_flip_is_exact_on_distribution() {
        let mut p = vec![1.0, 0.0];
        apply_readout(&mut p, &[0.1]);
        assert_eq!(p, vec![0.9, 0.1]);
    }

    #[test]
    fn sampler_handles_degenerate_distributions() {
        let mut rng = rng_from_seed(0);
        assert_eq!(
            sample_counts(&[0.0, 1.0, 0.0], 10, &mut rng).unwrap(),
            vec![0, 10, 0]
        );
    }

    #[test]
    fn permutation_relabels_physical_counts() {
        let dev = DeviceModel::noiseless(3).unwrap();
        let c = Circuit::from_gates(2, [Gate::X(0)]).unwrap();
        let perm = AllocationPolicy::FixedPermutation {
            perm: vec![2, 0, 1],
        };
        let r = run_job(&c, 10, 0, &dev, &perm).unwrap();
        assert_eq!(r.counts, BTreeMap::from([("10".to_string(), 10)]));
        assert_eq!(
            r.physical_counts(3),
            BTreeMap::from([("001".to_string(), 10)])
        );
    }

    #[test]
    fn per_qubit_noise_follows_allocation() {
        // Only physical qubit 1 flips its readout; X on logical 0 placed there.
        let noise = NoiseModel::ideal()
            .with_wire(1, QubitNoise::new(0.0, 0.0, 1.0).unwrap())
            .unwrap();
        let dev = DeviceModel::new(2, noise).unwrap();
        let c = Circuit::from_gates(1, [Gate::X(0)]).unwrap();
        let on_flipper = AllocationPolicy::FixedPermutation { perm: vec![1, 0] };
        let r = run_job(&c, 5, 0, &dev, &on_flipper).unwrap();
        assert_eq!(r.counts, BTreeMap::from([("0".to_string(), 5)]));
        let r = run_job(&c, 5, 0, &dev, &AllocationPolicy::Identity).unwrap();
        assert_eq!(r.counts, BTreeMap::from([("1".to_string(), 5)]));
    }

    #[test]
    fn rerouted_measurement_sees_residual() {
        let dev = DeviceModel::noiseless(4)
            .unwrap()
            .with_residual(vec![2, 3], bell::phi_plus())
            .unwrap();
        let prep = Circuit::new(2).unwrap();
        let measure = bell_prep().inverse();
        let policy = AllocationPolicy::adversarial();
        let honest = run_prepare_measure(&prep, &measure, 0, 100, 0, &dev, &policy).unwrap();
        assert!(!honest.allocation.rerouted);
        let rerouted = run_prepare_measure(&prep, &measure, 1, 100, 0, &dev, &policy).unwrap();
        assert!(rerouted.allocation.rerouted);
        assert_eq!(rerouted.allocation.logical_to_physical, vec![2, 3]);
        assert_eq!(rerouted.counts, BTreeMap::from([("00".to_string(), 100)]));
    }

    #[test]
    fn job_file_round_trip() {
        let job = JobFile {
            circuit: "qubits 2\nh 0\ncx 0 1\n".into(),
            shots: 100,
            seed: 4,
            device: DeviceSpec {
                qubits: 3,
                noise: NoiseModel::ideal(),
                residual_states: vec![],
            },
            policy: AllocationPolicy::FixedPermutation {
                perm: vec![1, 2, 0],
            },
            job_id: 0,
        };
        let text = serde_json::to_string(&job).unwrap();
        let back: JobFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, job);
        assert_eq!(back.run().unwrap().counts.values().sum::<u64>(), 100);
    }
}
