//! Prepare-and-measure baseline: `tr[Wρ]` assembled from two separately
//! submitted jobs, one per sign class of the spectral split.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::device::{AllocationPolicy, DeviceModel};
use super::job::{bitstring, run_prepare_measure, JobResult};
use crate::circuit::{diagonalizing_circuit, Preparation};
use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};
use crate::witness::SpectralSplit;

pub const PLUS_JOB: u64 = 0;
pub const MINUS_JOB: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmEstimate {
    pub estimate: f64,
    pub std: f64,
    pub plus_term: f64,
    pub minus_term: f64,
    pub plus_job: JobResult,
    pub minus_job: JobResult,
}

/// Orthonormal basis whose leading columns are `vectors`, completed by
/// Gram-Schmidt on computational basis states.
fn complete_basis(n_qubits: usize, vectors: &[&StateVector]) -> Result<Operator> {
    let d = 1usize << n_qubits;
    let mut cols: Vec<Vec<Complex64>> = vectors.iter().map(|v| v.amplitudes().to_vec()).collect();
    for e in 0..d {
        if cols.len() == d {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[e] = Complex64::new(1.0, 0.0);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    if cols.len() != d {
        return Err(Error::Tolerance("could not complete the eigenbasis".into()));
    }
    Ok(Operator::from_fn(n_qubits, |r, c| cols[c][r]))
}

/// Frequency of outcome `index` on the first `n` wires.
fn marginal_fraction(job: &JobResult, index: usize, n: usize) -> f64 {
    let key = bitstring(index, n);
    let hits: u64 = job
        .counts
        .iter()
        .filter(|(bits, _)| bits[..n] == key)
        .map(|(_, &c)| c)
        .sum();
    hits as f64 / job.shots as f64
}

/// Mean and variance of `Σ aᵢ p̂ᵢ` for multinomial frequencies.
fn weighted_term(job: &JobResult, weights: &[(usize, f64)], n: usize) -> (f64, f64) {
    let freqs: Vec<(f64, f64)> = weights
        .iter()
        .map(|&(i, a)| (a, marginal_fraction(job, i, n)))
        .collect();
    let mean: f64 = freqs.iter().map(|(a, p)| a * p).sum();
    let second: f64 = freqs.iter().map(|(a, p)| a * a * p).sum();
    let var = ((second - mean * mean) / job.shots as f64).max(0.0);
    (mean, var)
}

/// Estimates `tr[Wρ] = Σ λ₊ p(e₊) − Σ |λ₋| p(e₋)` from two jobs
/// ([`PLUS_JOB`] and [`MINUS_JOB`]), each measuring in the eigenbasis of `W`.
pub fn split_pm_estimate(
    prep: &Preparation,
    split: &SpectralSplit,
    device: &DeviceModel,
    policy: &AllocationPolicy,
    shots: u64,
    seed: u64,
) -> Result<PmEstimate> {
    let n = split.n_qubits();
    if prep.system_qubits != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: prep.system_qubits,
        });
    }
    let ordered: Vec<&StateVector> = split
        .positive()
        .iter()
        .chain(split.negative())
        .map(|(_, v)| v)
        .collect();
    let basis = complete_basis(n, &ordered)?;
    let measure = diagonalizing_circuit(&basis)?;
    let n_plus = split.positive().len();
    let plus_weights: Vec<(usize, f64)> = split
        .positive()
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (i, *w))
        .collect();
    let minus_weights: Vec<(usize, f64)> = split
        .negative()
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (n_plus + i, *w))
        .collect();

    let plus_job = run_prepare_measure(
        &prep.circuit,
        &measure,
        PLUS_JOB,
        shots,
        seed,
        device,
        policy,
    )?;
    let minus_job = run_prepare_measure(
        &prep.circuit,
        &measure,
        MINUS_JOB,
        shots,
        seed,
        device,
        policy,
    )?;
    let (plus_term, var_p) = weighted_term(&plus_job, &plus_weights, n);
    let (minus_term, var_m) = weighted_term(&minus_job, &minus_weights, n);
    Ok(PmEstimate {
        estimate: plus_term - minus_term,
        std: (var_p + var_m).sqrt(),
        plus_term,
        minus_term,
        plus_job,
        minus_job,
    })
}
