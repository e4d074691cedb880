use num_complex::Complex64;

use super::{Circuit, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Operator, StateVector, C_ZERO};

/// Applies a `2^k`-dimensional unitary to `wires` of an `n_total`-qubit
/// amplitude buffer in place.
pub(crate) fn apply_local(amps: &mut [Complex64], n_total: usize, wires: &[usize], m: &Operator) {
    let k = wires.len();
    let dk = 1usize << k;
    let bits: Vec<usize> = wires.iter().map(|&w| 1usize << (n_total - 1 - w)).collect();
    let mask: usize = bits.iter().sum();
    let offsets: Vec<usize> = (0..dk)
        .map(|j| {
            (0..k)
                .filter(|&t| (j >> (k - 1 - t)) & 1 == 1)
                .map(|t| bits[t])
                .sum()
        })
        .collect();
    let mut local = vec![C_ZERO; dk];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (j, off) in offsets.iter().enumerate() {
            local[j] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            amps[base | off] = (0..dk).map(|col| m[(r, col)] * local[col]).sum();
        }
    }
}

fn ensure_width(circuit: &Circuit, n_qubits: usize) -> Result<()> {
    if circuit.width() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << circuit.width(),
            found: 1 << n_qubits,
        });
    }
    Ok(())
}

/// Applies every gate of `circuit` to `psi`.
pub fn apply_circuit(circuit: &Circuit, psi: &mut StateVector) -> Result<()> {
    ensure_width(circuit, psi.n_qubits())?;
    let n = psi.n_qubits();
    for g in circuit.gates() {
        apply_local(psi.amplitudes_mut(), n, &g.wires(), &g.matrix());
    }
    Ok(())
}

/// `U|0…0⟩`.
pub fn simulate_statevector(circuit: &Circuit) -> StateVector {
    let mut psi = StateVector::zero_state(circuit.width());
    apply_circuit(circuit, &mut psi).expect("fresh register matches width");
    psi
}

/// `ρ ↦ (1 - p)ρ + p·(I_K/2^k ⊗ tr_K ρ)` on the row-major density buffer.
fn depolarize(rho: &mut [Complex64], n: usize, wires: &[usize], p: f64) {
    if p == 0.0 {
        return;
    }
    let d = 1usize << n;
    let k = wires.len();
    let dk = 1usize << k;
    let bits: Vec<usize> = wires.iter().map(|&w| 1usize << (n - 1 - w)).collect();
    let mask: usize = bits.iter().sum();
    let offsets: Vec<usize> = (0..dk)
        .map(|j| {
            (0..k)
                .filter(|&t| (j >> (k - 1 - t)) & 1 == 1)
                .map(|t| bits[t])
                .sum()
        })
        .collect();
    let keep = 1.0 - p;
    let mix = p / dk as f64;
    for r0 in (0..d).filter(|r| r & mask == 0) {
        for c0 in (0..d).filter(|c| c & mask == 0) {
            let traced: Complex64 = offsets.iter().map(|o| rho[(r0 | o) * d + (c0 | o)]).sum();
            for (a, oa) in offsets.iter().enumerate() {
                for (b, ob) in offsets.iter().enumerate() {
                    let idx = (r0 | oa) * d + (c0 | ob);
                    rho[idx] *= keep;
                    if a == b {
                        rho[idx] += mix * traced;
                    }
                }
            }
        }
    }
}

/// Runs `circuit` on `rho`, following each gate with its depolarizing channel.
/// Readout errors are not applied here.
pub fn simulate_density_from(
    circuit: &Circuit,
    rho: &DensityMatrix,
    noise: &NoiseModel,
) -> Result<DensityMatrix> {
    ensure_width(circuit, rho.n_qubits())?;
    noise.validate()?;
    let n = rho.n_qubits();
    let mut buf: Vec<Complex64> = rho.as_operator().as_slice().to_vec();
    for g in circuit.gates() {
        let wires = g.wires();
        let m = g.matrix();
        let doubled: Vec<usize> = wires.iter().map(|w| w + n).collect();
        let m_conj = Operator::from_fn(m.n_qubits(), |r, c| m[(r, c)].conj());
        apply_local(&mut buf, 2 * n, &wires, &m);
        apply_local(&mut buf, 2 * n, &doubled, &m_conj);
        depolarize(&mut buf, n, &wires, noise.gate_error(g));
    }
    let op = Operator::from_row_major(buf)?;
    Ok(DensityMatrix::from_operator_unchecked(op))
}

pub fn simulate_density(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    let rho = DensityMatrix::pure(&StateVector::zero_state(circuit.width()));
    simulate_density_from(circuit, &rho, noise)
}
