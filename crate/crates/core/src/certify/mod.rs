//! Certification runs against an emulated cloud service.

pub mod device;
pub mod job;
pub mod pm;
pub mod quantify;
pub mod report;
pub mod scheme;
pub mod sweep;
pub mod verdict;

pub use device::{AllocationPolicy, DeviceModel, ResidualGroup};
pub use job::{
    run_job, run_job_scoped, run_job_with_id, run_prepare_measure, AllocationRecord, DeviceSpec,
    JobFile, JobResult, ResidualSpec,
};
pub use pm::{split_pm_estimate, PmEstimate, MINUS_JOB, PLUS_JOB};
pub use quantify::entanglement_lower_bound;
pub use report::{ideal_expectation, run_certification, CertificationReport, CertifyOptions};
pub use scheme::{assemble, scheme1_assemble, scheme2_assemble, EwcCircuit, Scheme};
pub use sweep::{noise_sweep, SweepRow};
pub use verdict::{binomial_std, certify, Verdict, DEFAULT_K_SIGMA};
