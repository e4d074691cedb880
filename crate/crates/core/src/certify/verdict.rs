use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witness::Window;

pub const DEFAULT_K_SIGMA: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    EntangledLower,
    EntangledUpper,
    NotCertified,
}

impl Verdict {
    pub fn is_entangled(self) -> bool {
        self != Verdict::NotCertified
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::EntangledLower => "ENTANGLED(lower)",
            Verdict::EntangledUpper => "ENTANGLED(upper)",
            Verdict::NotCertified => "NOT-CERTIFIED",
        })
    }
}

/// Entangled when the estimate leaves the window by more than `k_sigma`
/// standard deviations.
pub fn certify(estimate: f64, std: f64, window: &Window, k_sigma: f64) -> Result<Verdict> {
    if window.lower > window.upper {
        return Err(Error::InvalidArgument(format!(
            "window [{}, {}] is inverted",
            window.lower, window.upper
        )));
    }
    if std.is_nan() || std < 0.0 || k_sigma.is_nan() || k_sigma < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "std {std} and k_sigma {k_sigma} must be non-negative"
        )));
    }
    let margin = k_sigma * std;
    Ok(if estimate < window.lower - margin {
        Verdict::EntangledLower
    } else if estimate > window.upper + margin {
        Verdict::EntangledUpper
    } else {
        Verdict::NotCertified
    })
}

/// Standard deviation of `scale · p̂` for a binomial frequency `p̂`.
pub fn binomial_std(p_hat: f64, shots: u64, scale: f64) -> f64 {
    scale * (p_hat * (1.0 - p_hat) / shots as f64).sqrt()
}
