//! EW 2.0 witness bundles.
//!
//! A bundle pairs a witness `W⁽⁺⁾` with its mirror `W⁽⁻⁾` through one
//! non-negative operator `W̃`:
//!
//! ```text
//! W̃ = (1 - p) W⁽⁺⁾ + p I/2ⁿ = (1 - q) W⁽⁻⁾ + q I/2ⁿ
//! ```
//!
//! Product states satisfy `B_L ≤ tr[W̃σ] ≤ B_U`; a value outside the window
//! certifies entanglement.

mod decomposition;
mod io;
mod spa;
mod split;
mod window;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

pub use decomposition::{local_pauli_decomposition, LocalDecomposition, PauliTerm, PAULI_ZERO_TOL};
pub use io::{bundle_from_json, bundle_to_json, WITNESS_FORMAT};
pub use spa::{mix_with_white_noise, spa_negative, spa_negative_with_upper_bound, spa_positive};
pub use split::{spectral_split, SpectralSplit};
pub use window::{
    extremum_over_products, optimize_over_products, see_saw_from, separability_window,
    separability_window_with, Direction, SeeSawConfig, SeeSawRun, Window,
};

use crate::error::{Error, Result};
use crate::linalg::pauli::pauli_string;
use crate::linalg::{bell, eig_hermitian, DensityMatrix, Operator};

/// Tolerance of the bundle invariants.
pub const BUNDLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bell2,
    Ghz3,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Bell2 => "bell2",
            Family::Ghz3 => "ghz3",
        }
    }

    pub fn n_qubits(self) -> usize {
        match self {
            Family::Bell2 => 2,
            Family::Ghz3 => 3,
        }
    }

    pub fn bundle(self) -> WitnessBundle {
        match self {
            Family::Bell2 => build_witness_bell2(),
            Family::Ghz3 => build_witness_ghz3(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell2" => Ok(Family::Bell2),
            "ghz3" => Ok(Family::Ghz3),
            other => Err(Error::InvalidArgument(format!(
                "unknown witness family {other:?} (expected bell2 or ghz3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessBundle {
    pub label: String,
    pub n_qubits: usize,
    pub w_plus: Operator,
    pub w_minus: Operator,
    pub w_tilde: Operator,
    pub p: f64,
    pub q: f64,
    pub window: Window,
}

impl WitnessBundle {
    /// Builds a bundle from a witness: positive SPA, see-saw window over
    /// `n_parties` equal parties, then the mirror against `B_U`.
    pub fn from_witness(
        label: impl Into<String>,
        w_plus: Operator,
        n_parties: usize,
        cfg: &SeeSawConfig,
    ) -> Result<Self> {
        let (w_tilde, p) = spa_positive(&w_plus)?;
        let window = separability_window_with(&w_tilde, n_parties, cfg)?;
        let (w_minus, q) = spa_negative_with_upper_bound(&w_tilde, window.upper)?;
        let bundle = Self {
            label: label.into(),
            n_qubits: w_plus.n_qubits(),
            w_plus,
            w_minus,
            w_tilde,
            p,
            q,
            window,
        };
        bundle.validate()?;
        Ok(bundle)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Checks the mirror identities, positivity and ordering of the window.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        for op in [&self.w_plus, &self.w_minus, &self.w_tilde] {
            if op.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    found: op.dim(),
                });
            }
            op.ensure_hermitian(BUNDLE_TOL)?;
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "p = {} is not in (0, 1)",
                self.p
            )));
        }
        if self.q.is_nan() || self.q <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "q = {} is not above 1",
                self.q
            )));
        }
        let from_plus = mix_with_white_noise(&self.w_plus, self.p);
        let from_minus = mix_with_white_noise(&self.w_minus, self.q);
        let dev = from_plus
            .max_abs_diff(&self.w_tilde)
            .max(from_minus.max_abs_diff(&self.w_tilde));
        if dev > BUNDLE_TOL {
            return Err(Error::Tolerance(format!(
                "mirror identities violated by {dev:e}"
            )));
        }
        let tr = self.w_tilde.trace();
        if (tr.re - 1.0).abs() > BUNDLE_TOL || tr.im.abs() > BUNDLE_TOL {
            return Err(Error::Tolerance(format!("tr W̃ = {tr}")));
        }
        let eig = eig_hermitian(&self.w_tilde)?;
        if eig.min() < -BUNDLE_TOL {
            return Err(Error::Tolerance(format!(
                "W̃ has negative eigenvalue {:e}",
                eig.min()
            )));
        }
        let Window { lower, upper } = self.window;
        if !(eig.min() - BUNDLE_TOL <= lower && lower <= upper && upper <= eig.max() + BUNDLE_TOL) {
            return Err(Error::Tolerance(format!(
                "window [{lower}, {upper}] not inside the spectrum [{}, {}]",
                eig.min(),
                eig.max()
            )));
        }
        Ok(())
    }
}

/// `W⁽⁺⁾ = I/4 − (|φ⁺⟩⟨φ⁺| − |ψ⁻⟩⟨ψ⁻|)/2`.
pub fn bell2_witness() -> Operator {
    let phi = bell::phi_plus().projector();
    let psi = bell::psi_minus().projector();
    &Operator::identity(2).scale(0.25) - &(&phi - &psi).scale(0.5)
}

/// `W⁽⁺⁾ = (I − ½(XXX + ZZI + IZZ))/8`.
pub fn ghz3_witness() -> Operator {
    let stabilizers = ["XXX", "ZZI", "IZZ"]
        .iter()
        .map(|s| pauli_string(s).expect("valid Pauli string"))
        .fold(Operator::zeros(3), |acc, s| &acc + &s);
    (&Operator::identity(3) - &stabilizers.scale(0.5)).scale(0.125)
}

/// Two-qubit family detecting `|φ⁺⟩` (lower side) and `|ψ⁻⟩` (upper side).
pub fn build_witness_bell2() -> WitnessBundle {
    static CACHE: OnceLock<WitnessBundle> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            WitnessBundle::from_witness("bell2", bell2_witness(), 2, &SeeSawConfig::default())
                .expect("bell2 family is a valid bundle")
        })
        .clone()
}

/// Three-qubit family detecting GHZ-type states, window taken over fully
/// product states.
pub fn build_witness_ghz3() -> WitnessBundle {
    static CACHE: OnceLock<WitnessBundle> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            WitnessBundle::from_witness("ghz3", ghz3_witness(), 3, &SeeSawConfig::default())
                .expect("ghz3 family is a valid bundle")
        })
        .clone()
}

/// `tr[(I/2 − |φ⁺⟩⟨φ⁺|) ρ_iso]` with `ρ_iso = (1 − p)|φ⁺⟩⟨φ⁺| + p I/4`.
pub fn isotropic_detection_curve(p_noise: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_noise) {
        return Err(Error::InvalidArgument(format!(
            "noise weight {p_noise} is outside [0, 1]"
        )));
    }
    let phi = DensityMatrix::pure(&bell::phi_plus());
    let rho = DensityMatrix::mixture(&[
        (1.0 - p_noise, phi.clone()),
        (p_noise, DensityMatrix::maximally_mixed(2)),
    ])?;
    let w = &Operator::identity(2).scale(0.5) - phi.as_operator();
    crate::linalg::expectation(&w, &rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bell::ghz_family, expectation, StateVector};

    fn bell_basis() -> [StateVector; 4] {
        [
            bell::phi_plus(),
            bell::phi_minus(),
            bell::psi_plus(),
            bell::psi_minus(),
        ]
    }

    /// Independent oracle: W̃ written directly from the Bell-basis weights
    /// obtained by hand from the SPA arithmetic.
    fn bell2_w_tilde_oracle() -> Operator {
        let weights = [0.0, 0.25, 0.25, 0.5];
        bell_basis()
            .iter()
            .zip(weights)
            .fold(Operator::zeros(2), |acc, (v, w)| {
                &acc + &v.projector().scale(w)
            })
    }

    #[test]
    fn bell2_coefficients() {
        let b = build_witness_bell2();
        assert!((b.p - 0.5).abs() < 1e-12);
        assert!((b.q - 1.5).abs() < 1e-12);
        assert!(b.w_tilde.max_abs_diff(&bell2_w_tilde_oracle()) < 1e-12);
        let weights: Vec<f64> = bell_basis()
            .iter()
            .map(|v| expectation(&b.w_tilde, v).unwrap())
            .collect();
        for (got, want) in weights.iter().zip([0.0, 0.25, 0.25, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        let psi = expectation(&b.w_minus, &bell::psi_minus()).unwrap();
        assert!((psi + 0.25).abs() < 1e-12);
    }

    #[test]
    fn bell2_mirror_spectrum() {
        let b = build_witness_bell2();
        let eig = eig_hermitian(&b.w_minus).unwrap();
        for (got, want) in eig.values.iter().zip([0.75, 0.25, 0.25, -0.25]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn bell2_window() {
        let w = build_witness_bell2().window;
        assert!((w.lower - 0.125).abs() < 1e-6);
        assert!((w.upper - 0.375).abs() < 1e-6);
    }

    #[test]
    fn ghz3_coefficients() {
        let b = build_witness_ghz3();
        assert!((b.p - 1.0 / 3.0).abs() < 1e-12);
        assert!((b.q - 5.0 / 3.0).abs() < 1e-12);
        let phi_m010 = ghz_family(&[0, 1, 0], false);
        assert!((expectation(&b.w_minus, &phi_m010).unwrap() + 1.0 / 16.0).abs() < 1e-12);
        let phi_m000 = ghz_family(&[0, 0, 0], false);
        assert!((expectation(&b.w_tilde, &phi_m000).unwrap() - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn ghz3_w_tilde_eigenbasis() {
        // Hand-derived: W̃ = (2/3)W⁽⁺⁾ + I/24 on the |φ±ₓ⟩ basis.
        let b = build_witness_ghz3();
        let table = [
            ([0, 0, 0], true, 0.0),
            ([0, 0, 0], false, 1.0 / 12.0),
            ([0, 0, 1], true, 1.0 / 12.0),
            ([0, 0, 1], false, 1.0 / 6.0),
            ([0, 1, 0], true, 1.0 / 6.0),
            ([0, 1, 0], false, 0.25),
            ([0, 1, 1], true, 1.0 / 12.0),
            ([0, 1, 1], false, 1.0 / 6.0),
        ];
        for (bits, plus, want) in table {
            let v = ghz_family(&bits, plus);
            let got = expectation(&b.w_tilde, &v).unwrap();
            assert!((got - want).abs() < 1e-12, "{bits:?} {plus}: {got}");
        }
    }

    #[test]
    fn ghz3_window() {
        let w = build_witness_ghz3().window;
        assert!((w.lower - 1.0 / 24.0).abs() < 1e-6);
        assert!((w.upper - 5.0 / 24.0).abs() < 1e-6);
    }

    #[test]
    fn spa_positive_minimal() {
        for w in [bell2_witness(), ghz3_witness()] {
            let (_, p) = spa_positive(&w).unwrap();
            let under = mix_with_white_noise(&w, p - 1e-6);
            assert!(eig_hermitian(&under).unwrap().min() < 0.0);
            let at = eig_hermitian(&mix_with_white_noise(&w, p)).unwrap().min();
            assert!((-1e-10..=1e-8).contains(&at));
        }
    }

    #[test]
    fn spa_positive_rejects_psd() {
        let id = Operator::identity(2).scale(0.25);
        assert!(matches!(spa_positive(&id), Err(Error::NotAWitness { .. })));
    }

    #[test]
    fn spa_negative_rejects_identity() {
        let id = Operator::identity(2).scale(0.25);
        assert!(matches!(
            spa_negative_with_upper_bound(&id, 0.25),
            Err(Error::NoMirror(_))
        ));
    }

    #[test]
    fn spa_negative_default_search() {
        let b = build_witness_bell2();
        let (w_minus, q) = spa_negative(&b.w_tilde).unwrap();
        assert!((q - 1.5).abs() < 1e-12);
        assert!(w_minus.max_abs_diff(&b.w_minus) < 1e-10);
    }

    #[test]
    fn pauli_terms() {
        let bell = local_pauli_decomposition(&bell2_witness()).unwrap();
        assert_eq!(bell.labels(), vec!["II", "XX", "ZZ"]);
        let ghz = local_pauli_decomposition(&ghz3_witness()).unwrap();
        assert_eq!(ghz.labels(), vec!["III", "IZZ", "XXX", "ZZI"]);
        assert!((ghz.coefficient("III") - 0.125).abs() < 1e-15);
        for l in ["XXX", "ZZI", "IZZ"] {
            assert!((ghz.coefficient(l) + 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bell2_split() {
        let s = spectral_split(&bell2_witness()).unwrap();
        assert_eq!(s.c_minus().map(|c| (c - 0.25).abs() < 1e-12), Some(true));
        assert!(s.p_minus().max_abs_diff(&bell::phi_plus().projector()) < 1e-12);
        assert!(s.c_plus().is_none());
        assert!(s.reconstruct().max_abs_diff(&bell2_witness()) < 1e-12);
    }

    #[test]
    fn isotropic_curve() {
        assert!((isotropic_detection_curve(0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!(isotropic_detection_curve(2.0 / 3.0).unwrap().abs() < 1e-15);
        assert!((isotropic_detection_curve(1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(isotropic_detection_curve(1.5).is_err());
        assert!(isotropic_detection_curve(-0.1).is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::Bell2, Family::Ghz3] {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("w3".parse::<Family>().is_err());
    }
}
