use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::device::{AllocationPolicy, DeviceModel};
use super::job::{run_job_scoped, AllocationRecord};
use super::pm::split_pm_estimate;
use super::quantify::entanglement_lower_bound;
use super::scheme::{assemble, Scheme};
use super::verdict::{binomial_std, certify, Verdict, DEFAULT_K_SIGMA};
use crate::circuit::{simulate_statevector, Preparation};
use crate::error::{Error, Result};
use crate::json::to_json_string;
use crate::linalg::{eig_hermitian, expectation, DensityMatrix, Operator};
use crate::witness::{spectral_split, Window, WitnessBundle};

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyOptions {
    pub scheme: Scheme,
    pub shots: u64,
    pub seed: u64,
    pub k_sigma: f64,
    pub device: DeviceModel,
    pub policy: AllocationPolicy,
}

impl CertifyOptions {
    pub fn new(scheme: Scheme, shots: u64, seed: u64, device: DeviceModel) -> Self {
        CertifyOptions {
            scheme,
            shots,
            seed,
            k_sigma: DEFAULT_K_SIGMA,
            device,
            policy: AllocationPolicy::Identity,
        }
    }

    pub fn with_policy(mut self, policy: AllocationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_k_sigma(mut self, k_sigma: f64) -> Self {
        self.k_sigma = k_sigma;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub witness: String,
    pub preparation: String,
    pub scheme: Scheme,
    pub estimate: f64,
    /// Noiseless value of the estimated quantity.
    pub ideal: f64,
    pub shots: u64,
    pub std: f64,
    pub window: Window,
    pub k_sigma: f64,
    pub verdict: Verdict,
    pub seed: u64,
    /// Observed all-zero frequency (Schemes 1 and 2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    /// Entanglement lower bound in ebits (two-qubit witnesses, Schemes 1 and 2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ebits: Option<f64>,
    pub allocation: Vec<AllocationRecord>,
    pub counts: Vec<BTreeMap<String, u64>>,
}

impl CertificationReport {
    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `VERDICT estimate=… std=… window=[…, …]`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} estimate={:.6} std={:.6} window=[{:.6}, {:.6}] scheme={}",
            self.verdict,
            self.estimate,
            self.std,
            self.window.lower,
            self.window.upper,
            self.scheme
        )
    }
}

/// `tr[op ρ_S]` for the noiseless output of `prep` restricted to its system wires.
pub fn ideal_expectation(prep: &Preparation, op: &Operator) -> Result<f64> {
    let psi = simulate_statevector(&prep.circuit);
    let rho = DensityMatrix::pure(&psi);
    let rho = if prep.ancillas() > 0 {
        rho.partial_trace(&(0..prep.system_qubits).collect::<Vec<_>>())?
    } else {
        rho
    };
    expectation(op, &rho)
}

/// Window used for the split estimator: separable states give `tr[Wρ] ≥ 0`,
/// and no state exceeds the top eigenvalue.
fn split_window(w: &Operator) -> Window {
    Window {
        lower: 0.0,
        upper: eig_hermitian(w).map(|e| e.max()).unwrap_or(f64::MAX),
    }
}

pub fn run_certification(
    prep: &Preparation,
    bundle: &WitnessBundle,
    opts: &CertifyOptions,
) -> Result<CertificationReport> {
    if opts.shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    opts.policy.validate()?;
    let base = |scheme, estimate, ideal, std, window: Window| -> Result<CertificationReport> {
        Ok(CertificationReport {
            witness: bundle.label.clone(),
            preparation: prep.circuit.name().to_string(),
            scheme,
            estimate,
            ideal,
            shots: opts.shots,
            std,
            verdict: certify(estimate, std, &window, opts.k_sigma)?,
            window,
            k_sigma: opts.k_sigma,
            seed: opts.seed,
            p0: None,
            ebits: None,
            allocation: Vec::new(),
            counts: Vec::new(),
        })
    };
    match opts.scheme {
        Scheme::SplitPm => {
            let split = spectral_split(&bundle.w_plus)?;
            let r = split_pm_estimate(
                prep,
                &split,
                &opts.device,
                &opts.policy,
                opts.shots,
                opts.seed,
            )?;
            let ideal = ideal_expectation(prep, &bundle.w_plus)?;
            let mut report = base(
                Scheme::SplitPm,
                r.estimate,
                ideal,
                r.std,
                split_window(&bundle.w_plus),
            )?;
            report.allocation = vec![
                r.plus_job.allocation.clone(),
                r.minus_job.allocation.clone(),
            ];
            report.counts = vec![r.plus_job.counts, r.minus_job.counts];
            Ok(report)
        }
        scheme => {
            let ewc = assemble(scheme, prep, bundle)?;
            let job = run_job_scoped(
                &ewc.circuit,
                ewc.prep_gates.end,
                opts.shots,
                opts.seed,
                &opts.device,
                &opts.policy,
                0,
            )?;
            let p0 = job.zero_fraction(&ewc.readout_wires);
            let estimate = ewc.scale * p0;
            let std = binomial_std(p0, opts.shots, ewc.scale);
            let ideal = ideal_expectation(prep, &bundle.w_tilde)?;
            let mut report = base(scheme, estimate, ideal, std, bundle.window)?;
            report.p0 = Some(p0);
            if bundle.n_qubits == 2 {
                report.ebits = Some(entanglement_lower_bound(estimate.clamp(0.0, 1.0), bundle)?);
            }
            report.allocation = vec![job.allocation];
            report.counts = vec![job.counts];
            Ok(report)
        }
    }
}
