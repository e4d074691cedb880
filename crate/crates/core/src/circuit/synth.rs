use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector};

/// Rotations with smaller angles are dropped.
const ANGLE_EPS: f64 = 1e-14;

/// `θ` with `R_y(θ)|0⟩ = a0|0⟩ + a1|1⟩`.
pub fn ry_angle(a0: f64, a1: f64) -> Result<f64> {
    if a0 < 0.0 || a1 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "amplitudes ({a0}, {a1}) must be non-negative"
        )));
    }
    if (a0 * a0 + a1 * a1 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "amplitudes ({a0}, {a1}) are not normalized"
        )));
    }
    Ok(2.0 * a1.atan2(a0))
}

/// `(α, β, γ, δ)` with `U = e^{iα} R_z(β) R_y(γ) R_z(δ)`.
pub fn zyz_angles(u: &Operator) -> Result<(f64, f64, f64, f64)> {
    if u.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let dev = u.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = det.arg() / 2.0;
    let phase = num_complex::Complex64::from_polar(1.0, -alpha);
    let v00 = u[(0, 0)] * phase;
    let v10 = u[(1, 0)] * phase;
    let v11 = u[(1, 1)] * phase;
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    let sum = if v11.norm() > 1e-12 {
        2.0 * v11.arg()
    } else {
        0.0
    };
    let diff = if v10.norm() > 1e-12 {
        2.0 * v10.arg()
    } else {
        0.0
    };
    Ok((alpha, (sum + diff) / 2.0, gamma, (sum - diff) / 2.0))
}

fn push_rot(c: &mut Circuit, gate: Gate) -> Result<()> {
    let angle = gate.params()[0];
    if angle.abs() > ANGLE_EPS {
        c.push(gate)?;
    }
    Ok(())
}

/// Controlled-`U` on (control 0, target 1) from `U = e^{iα} A X B X C` with
/// `ABC = I`, up to global phase.
pub fn controlled_u_decompose(u: &Operator) -> Result<Circuit> {
    let (alpha, beta, gamma, delta) = zyz_angles(u)?;
    let mut c = Circuit::new(2)?.with_name("controlled-u");
    // C = R_z((δ-β)/2)
    push_rot(&mut c, Gate::Rz(1, (delta - beta) / 2.0))?;
    c.push(Gate::Cx(0, 1))?;
    // B = R_y(-γ/2) R_z(-(δ+β)/2)
    push_rot(&mut c, Gate::Rz(1, -(delta + beta) / 2.0))?;
    push_rot(&mut c, Gate::Ry(1, -gamma / 2.0))?;
    c.push(Gate::Cx(0, 1))?;
    // A = R_z(β) R_y(γ/2)
    push_rot(&mut c, Gate::Ry(1, gamma / 2.0))?;
    push_rot(&mut c, Gate::Rz(1, beta))?;
    // diag(1, e^{iα}) on the control.
    push_rot(&mut c, Gate::Rz(0, alpha))?;
    Ok(c)
}

#[derive(Clone, Copy)]
enum Axis {
    Y,
    Z,
}

/// Rotation on `target` by `angles[v]`, where `v` is the value of `controls`
/// read with `controls[0]` most significant.
fn uniformly_controlled(
    c: &mut Circuit,
    axis: Axis,
    controls: &[usize],
    target: usize,
    angles: &[f64],
) -> Result<()> {
    if angles.iter().all(|a| a.abs() <= ANGLE_EPS) {
        return Ok(());
    }
    let Some((&first, rest)) = controls.split_first() else {
        let gate = match axis {
            Axis::Y => Gate::Ry(target, angles[0]),
            Axis::Z => Gate::Rz(target, angles[0]),
        };
        return push_rot(c, gate);
    };
    let half = angles.len() / 2;
    let (lo, hi) = angles.split_at(half);
    let mean: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (a + b) / 2.0).collect();
    let diff: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (a - b) / 2.0).collect();
    uniformly_controlled(c, axis, rest, target, &mean)?;
    if diff.iter().any(|a| a.abs() > ANGLE_EPS) {
        c.push(Gate::Cx(first, target))?;
        uniformly_controlled(c, axis, rest, target, &diff)?;
        c.push(Gate::Cx(first, target))?;
    }
    Ok(())
}

/// Removes adjacent identical CX pairs until none remain.
fn cancel_cx_pairs(c: &Circuit) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(c.len());
    for &g in c.gates() {
        match (out.last(), g) {
            (Some(Gate::Cx(a, b)), Gate::Cx(x, y)) if *a == x && *b == y => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    Circuit::from_gates(c.width(), out)
        .expect("gates were valid")
        .with_name(c.name().to_string())
}

fn basis_index(target: &StateVector) -> Option<usize> {
    let amps = target.amplitudes();
    let mut hit = None;
    for (i, a) in amps.iter().enumerate() {
        if a.norm_sqr() > 1e-24 {
            if hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
    }
    hit.filter(|&i| (amps[i].norm() - 1.0).abs() < 1e-12)
}

/// Circuit preparing `target` from `|0…0⟩` up to global phase.
///
/// Magnitudes are loaded top-down with uniformly controlled `R_y` rotations
/// and phases afterwards with uniformly controlled `R_z` rotations; basis
/// states reduce to `X` gates.
pub fn synthesize_state_prep(target: &StateVector) -> Result<Circuit> {
    let n = target.n_qubits();
    let norm = target.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("target norm {norm} is not 1")));
    }
    let mut c = Circuit::new(n)?.with_name("state-prep");
    if let Some(idx) = basis_index(target) {
        for w in 0..n {
            if (idx >> (n - 1 - w)) & 1 == 1 {
                c.push(Gate::X(w))?;
            }
        }
        return Ok(c);
    }

    let amps = target.amplitudes();
    let weights: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
    let controls: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // Prefix p of k bits owns the block of 2^(n-k) indices starting at p << (n-k).
        let block = 1usize << (n - k);
        let angles: Vec<f64> = (0..1usize << k)
            .map(|p| {
                let start = p * block;
                let w0: f64 = weights[start..start + block / 2].iter().sum();
                let w1: f64 = weights[start + block / 2..start + block].iter().sum();
                2.0 * w1.sqrt().atan2(w0.sqrt())
            })
            .collect();
        uniformly_controlled(&mut c, Axis::Y, &controls[..k], k, &angles)?;
    }

    let mut phases: Vec<f64> = amps
        .iter()
        .map(|a| if a.norm_sqr() > 1e-30 { a.arg() } else { 0.0 })
        .collect();
    for k in (0..n).rev() {
        let pairs: Vec<(f64, f64)> = phases.chunks(2).map(|p| (p[0], p[1])).collect();
        let angles: Vec<f64> = pairs.iter().map(|(p0, p1)| p1 - p0).collect();
        uniformly_controlled(&mut c, Axis::Z, &controls[..k], k, &angles)?;
        phases = pairs.iter().map(|(p0, p1)| (p0 + p1) / 2.0).collect();
    }
    Ok(cancel_cx_pairs(&c))
}

/// `I - 2|0…0⟩⟨0…0|` as `X^⊗n · C^{n-1}Z · X^⊗n`.
fn zero_reflection(c: &mut Circuit) -> Result<()> {
    let n = c.width();
    for w in 0..n {
        c.push(Gate::X(w))?;
    }
    match n {
        1 => c.push(Gate::Z(0))?,
        2 => {
            c.push(Gate::H(1))?;
            c.push(Gate::Cx(0, 1))?;
            c.push(Gate::H(1))?;
        }
        3 => {
            c.push(Gate::H(2))?;
            c.push(Gate::Ccx(0, 1, 2))?;
            c.push(Gate::H(2))?;
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "basis changes are supported on at most 3 qubits, not {n}"
            )))
        }
    }
    for w in 0..n {
        c.push(Gate::X(w))?;
    }
    Ok(())
}

/// Circuit `V` with `V|bᵢ⟩ ∝ |i⟩` for the orthonormal columns `bᵢ` of
/// `basis`, built from Householder reflections `P_w (I - 2|0⟩⟨0|) P_w†`.
pub fn diagonalizing_circuit(basis: &Operator) -> Result<Circuit> {
    let dev = basis.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let n = basis.n_qubits();
    let d = basis.dim();
    let mut out = Circuit::new(n)?.with_name("basis-change");
    // Image of the basis under the reflections applied so far.
    let mut current = basis.clone();
    for k in 0..d {
        let v: Vec<num_complex::Complex64> = (0..d).map(|r| current[(r, k)]).collect();
        let vk = v[k];
        if (vk.norm() - 1.0).abs() < 1e-13 {
            continue;
        }
        let target_phase = if vk.norm() > 1e-14 {
            -vk / vk.norm()
        } else {
            -num_complex::Complex64::new(1.0, 0.0)
        };
        let mut w = v.clone();
        w[k] -= target_phase;
        let reflector = StateVector::normalized(w)?;
        let prep = synthesize_state_prep(&reflector)?;
        let mut step = prep.inverse();
        zero_reflection(&mut step)?;
        step.append(&prep)?;
        let r = &Operator::identity(n) - &reflector.projector().scale(2.0);
        current = r.matmul(&current)?;
        out.append(&step)?;
    }
    Ok(cancel_cx_pairs(&out))
}
