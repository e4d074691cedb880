//! Named states: single-qubit eigenstates, the Bell basis and the GHZ-type
//! family `|φ±ₓ⟩ = (|x⟩ ± |x̄⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use super::StateVector;

pub fn plus() -> StateVector {
    StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
}

pub fn minus() -> StateVector {
    StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap()
}

/// `(|00⟩ + |11⟩)/√2`
pub fn phi_plus() -> StateVector {
    ghz_family(&[0, 0], true)
}

/// `(|00⟩ − |11⟩)/√2`
pub fn phi_minus() -> StateVector {
    ghz_family(&[0, 0], false)
}

/// `(|01⟩ + |10⟩)/√2`
pub fn psi_plus() -> StateVector {
    ghz_family(&[0, 1], true)
}

/// `(|01⟩ − |10⟩)/√2`
pub fn psi_minus() -> StateVector {
    ghz_family(&[0, 1], false)
}

/// `(|x⟩ ± |x̄⟩)/√2` for a bit string `x` (qubit 0 first).
pub fn ghz_family(bits: &[u8], plus: bool) -> StateVector {
    let n = bits.len();
    let idx = bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
    let flipped = !idx & ((1usize << n) - 1);
    let mut amps = vec![0.0; 1 << n];
    amps[idx] += FRAC_1_SQRT_2;
    amps[flipped] += if plus { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    StateVector::from_real(&amps).unwrap()
}
