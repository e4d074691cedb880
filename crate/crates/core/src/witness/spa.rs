use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, Operator};

use super::window::{extremum_over_products, Direction, SeeSawConfig};

const TRACE_TOL: f64 = 1e-10;

fn white_noise(n_qubits: usize) -> Operator {
    Operator::identity(n_qubits).scale(1.0 / (1usize << n_qubits) as f64)
}

fn ensure_unit_trace(op: &Operator) -> Result<()> {
    let tr = op.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidArgument(format!(
            "operator trace {tr} is not one"
        )));
    }
    Ok(())
}

/// `(1 - weight)·w + weight·I/2ⁿ`.
pub fn mix_with_white_noise(w: &Operator, weight: f64) -> Operator {
    &w.scale(1.0 - weight) + &white_noise(w.n_qubits()).scale(weight)
}

/// Replaces `x` by the nearest fraction with denominator at most 1024 when
/// the two agree to eigensolver precision.
pub(crate) fn snap_rational(x: f64) -> f64 {
    for den in 1..=1024u32 {
        let den = f64::from(den);
        let r = (x * den).round() / den;
        if (x - r).abs() <= 1e-13 * x.abs().max(1.0) {
            return r;
        }
    }
    x
}

/// Positive structural physical approximation.
///
/// Returns `(W̃, p)` with the smallest `p ∈ (0, 1)` for which
/// `W̃ = (1-p)W + p·I/2ⁿ` is positive semidefinite:
/// `p = -λ_min·2ⁿ / (1 - λ_min·2ⁿ)`.
pub fn spa_positive(w: &Operator) -> Result<(Operator, f64)> {
    w.ensure_hermitian(1e-12)?;
    ensure_unit_trace(w)?;
    let lambda_min = snap_rational(eig_hermitian(w)?.min());
    if lambda_min >= 0.0 {
        return Err(Error::NotAWitness {
            min_eigenvalue: lambda_min,
        });
    }
    let d = (1usize << w.n_qubits()) as f64;
    let p = (-lambda_min * d) / (1.0 - lambda_min * d);
    Ok((mix_with_white_noise(w, p), p))
}

/// Negative SPA against a known separable upper bound `B_U` of `W̃`.
///
/// The mirrored witness is `W⁽⁻⁾ = (q·I/2ⁿ - W̃)/(q - 1)` with `q = 2ⁿ·B_U`,
/// the largest mixing weight for which `W⁽⁻⁾` stays non-negative on every
/// product state. A state then violates `B_U` exactly when `W⁽⁻⁾` detects it.
pub fn spa_negative_with_upper_bound(w_tilde: &Operator, upper: f64) -> Result<(Operator, f64)> {
    w_tilde.ensure_hermitian(1e-12)?;
    ensure_unit_trace(w_tilde)?;
    let n = w_tilde.n_qubits();
    let d = (1usize << n) as f64;
    let spectrum = eig_hermitian(w_tilde)?;
    if spectrum.min() < -1e-10 {
        return Err(Error::InvalidArgument(format!(
            "SPA operator has negative eigenvalue {:e}",
            spectrum.min()
        )));
    }
    if spectrum.max() - 1.0 / d <= 1e-12 {
        return Err(Error::NoMirror(
            "operator is proportional to the identity".into(),
        ));
    }
    let q = snap_rational(d * upper);
    if q <= 1.0 + 1e-12 {
        return Err(Error::NoMirror(format!(
            "upper bound {upper} gives q = {q} ≤ 1"
        )));
    }
    if spectrum.max() - upper <= 1e-12 {
        return Err(Error::NoMirror(
            "upper bound is attained by a product state; the mirror would be positive".into(),
        ));
    }
    let w_minus = (&white_noise(n).scale(q) - w_tilde).scale(1.0 / (q - 1.0));
    Ok((w_minus, q))
}

/// Negative SPA; the separable upper bound is found with the default see-saw
/// over fully product states.
pub fn spa_negative(w_tilde: &Operator) -> Result<(Operator, f64)> {
    let cfg = SeeSawConfig::default();
    let upper = extremum_over_products(w_tilde, w_tilde.n_qubits(), Direction::Maximize, &cfg)?;
    spa_negative_with_upper_bound(w_tilde, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping_only_absorbs_roundoff() {
        assert_eq!(snap_rational(-0.25000000000000006), -0.25);
        assert_eq!(snap_rational(1.5000000000000013), 1.5);
        assert_eq!(snap_rational(1.0 / 3.0 + 1e-16), 1.0 / 3.0);
        assert_eq!(snap_rational(0.123456789), 0.123456789);
    }
}
