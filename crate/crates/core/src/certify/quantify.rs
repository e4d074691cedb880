use crate::error::{Error, Result};
use crate::witness::WitnessBundle;

/// Lower bound, in ebits, on the entangling power of a two-qubit circuit
/// whose witnessing circuit returned the all-zero probability `p0`.
///
/// Both window bounds contribute:
///
/// ```text
/// E ≥ max(p/4 − p0, 0) / (1 − p)      (lower violation)
/// E ≥ max(p0 − q/4, 0) / (q − 1)      (upper violation)
/// ```
pub fn entanglement_lower_bound(p0: f64, bundle: &WitnessBundle) -> Result<f64> {
    if bundle.n_qubits != 2 {
        return Err(Error::InvalidArgument(format!(
            "the entanglement bound is defined for two-qubit witnesses, got {} qubits",
            bundle.n_qubits
        )));
    }
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidArgument(format!(
            "p0 = {p0} is not a probability"
        )));
    }
    let (p, q) = (bundle.p, bundle.q);
    let lower = (p / 4.0 - p0).max(0.0) / (1.0 - p);
    let upper = (p0 - q / 4.0).max(0.0) / (q - 1.0);
    Ok(lower.max(upper).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{build_witness_bell2, build_witness_ghz3};

    #[test]
    fn boundary_values() {
        let b = build_witness_bell2();
        assert_eq!(entanglement_lower_bound(0.0, &b).unwrap(), 0.25);
        assert_eq!(entanglement_lower_bound(0.125, &b).unwrap(), 0.0);
        assert_eq!(entanglement_lower_bound(0.375, &b).unwrap(), 0.0);
        assert_eq!(entanglement_lower_bound(0.25, &b).unwrap(), 0.0);
    }

    #[test]
    fn reported_table_from_back_solved_inputs() {
        let b = build_witness_bell2();
        for (p0, want) in [
            (0.0386, 0.1728),
            (0.0305, 0.1890),
            (0.4198, 0.0896),
            (0.446, 0.1420),
        ] {
            let got = entanglement_lower_bound(p0, &b).unwrap();
            assert!((got - want).abs() < 1e-4, "p0 {p0}: {got} vs {want}");
        }
    }

    #[test]
    fn rejects_three_qubit_bundle_and_bad_probability() {
        assert!(entanglement_lower_bound(0.1, &build_witness_ghz3()).is_err());
        assert!(entanglement_lower_bound(1.5, &build_witness_bell2()).is_err());
    }
}
