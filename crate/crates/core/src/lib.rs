//! Certification of entanglement-generating quantum circuits.
//!
//! The crate builds EW 2.0 witness bundles (a witness, its mirror and the
//! non-negative SPA operator shared by both), turns the SPA operator into an
//! entanglement-witnessing circuit through purification, and estimates the
//! witness value from measurement statistics returned by an emulated cloud
//! service whose qubit allocation is not trusted.
//!
//! - [`linalg`]: dense states, operators, spectra and partial traces.
//! - [`witness`]: witness families, SPA, separability windows.
//! - [`circuit`]: gate lists, the text format, simulators and synthesis.
//! - [`certify`]: Scheme 1 / Scheme 2 assembly, the job emulator, verdicts
//!   and entanglement quantification.

pub mod certify;
pub mod circuit;
pub mod error;
pub mod json;
pub mod linalg;
pub mod seed;
pub mod witness;

pub use error::{Error, ParseError, Result};
