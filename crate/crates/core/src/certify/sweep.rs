use serde::{Deserialize, Serialize};

use super::device::{AllocationPolicy, DeviceModel};
use super::report::{run_certification, CertifyOptions};
use super::scheme::{assemble, Scheme};
use super::verdict::Verdict;
use crate::circuit::{NoiseModel, Preparation, QubitNoise};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::witness::WitnessBundle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub noise: QubitNoise,
    pub estimate: f64,
    pub std: f64,
    pub verdict: Verdict,
}

/// One certification per grid point on a homogeneous device; point `i`
/// uses seed `derive_seed(seed, i)`.
pub fn noise_sweep(
    prep: &Preparation,
    bundle: &WitnessBundle,
    scheme: Scheme,
    grid: &[QubitNoise],
    shots: u64,
    seed: u64,
    k_sigma: f64,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("noise grid is empty".into()));
    }
    let width = match scheme {
        Scheme::SplitPm => prep.circuit.width(),
        s => assemble(s, prep, bundle)?.circuit.width(),
    };
    grid.iter()
        .enumerate()
        .map(|(i, &noise)| {
            let device = DeviceModel::new(width, NoiseModel::uniform(noise)?)?;
            let opts = CertifyOptions::new(scheme, shots, derive_seed(seed, i as u64), device)
                .with_policy(AllocationPolicy::Identity)
                .with_k_sigma(k_sigma);
            let r = run_certification(prep, bundle, &opts)?;
            Ok(SweepRow {
                noise,
                estimate: r.estimate,
                std: r.std,
                verdict: r.verdict,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verdict::DEFAULT_K_SIGMA;
    use crate::circuit::{catalog_circuit, CatalogFamily};
    use crate::witness::build_witness_bell2;

    fn grid() -> Vec<QubitNoise> {
        (0..=5)
            .map(|i| QubitNoise::new(0.0, i as f64 / 5.0, 0.0).unwrap())
            .collect()
    }

    #[test]
    fn bell_egc_drifts_into_the_window() {
        let prep = catalog_circuit(CatalogFamily::TwoQubit, 1).unwrap();
        let b = build_witness_bell2();
        let rows = noise_sweep(&prep, &b, Scheme::One, &grid(), 8192, 4, DEFAULT_K_SIGMA).unwrap();
        assert_eq!(rows[0].verdict, Verdict::EntangledLower);
        assert_eq!(rows.last().unwrap().verdict, Verdict::NotCertified);
        for (row, p) in rows.iter().zip(grid()) {
            // Two-qubit depolarizing after the CX: estimate = p · 1/4.
            let ideal = 0.25 * p.depol_2q;
            assert!((row.estimate - ideal).abs() <= 5.0 * row.std.max(1e-3));
        }
    }

    #[test]
    fn empty_grid_is_rejected() {
        let prep = catalog_circuit(CatalogFamily::TwoQubit, 1).unwrap();
        let b = build_witness_bell2();
        assert!(noise_sweep(&prep, &b, Scheme::One, &[], 10, 0, 5.0).is_err());
    }
}
