//! Separability windows by alternating (see-saw) optimization over product
//! states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::random::haar_state;
use crate::linalg::{eig_hermitian, Operator, StateVector, C_ZERO};
use crate::seed::derived_rng;

/// Extra sweeps spent refining the best restart.
const POLISH_SWEEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        Self {
            restarts: 1000,
            tol: 1e-9,
            max_sweeps: 500,
            seed: 0,
        }
    }
}

/// Range `[B_L, B_U]` of `tr[W̃σ]` over product states `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
}

impl Window {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::InvalidArgument(format!(
                "window lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, value: f64) -> bool {
        (self.lower..=self.upper).contains(&value)
    }
}

/// Result of one see-saw descent.
#[derive(Debug, Clone)]
pub struct SeeSawRun {
    pub value: f64,
    pub parties: Vec<StateVector>,
    /// Objective after every single-party update.
    pub history: Vec<f64>,
}

impl SeeSawRun {
    pub fn product_state(&self) -> StateVector {
        product(&self.parties)
    }
}

fn product(parties: &[StateVector]) -> StateVector {
    parties[1..]
        .iter()
        .fold(parties[0].clone(), |acc, p| acc.kron(p))
}

fn party_size(n_qubits: usize, n_parties: usize) -> Result<usize> {
    if n_parties == 0 || !n_qubits.is_multiple_of(n_parties) {
        return Err(Error::InvalidQubits(format!(
            "{n_qubits} qubits cannot be split evenly into {n_parties} parties"
        )));
    }
    Ok(n_qubits / n_parties)
}

/// `(⊗_{j≠k}⟨a_j|) W (⊗_{j≠k}|a_j⟩)` on party `k`.
fn effective_operator(w: &Operator, parties: &[StateVector], k: usize, m: usize) -> Operator {
    let n_parties = parties.len();
    let d = w.dim();
    let local_mask = (1usize << m) - 1;
    let split = |idx: usize| -> (usize, Complex64) {
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut local = 0;
        for (j, party) in parties.iter().enumerate() {
            let shift = m * (n_parties - 1 - j);
            let sub = (idx >> shift) & local_mask;
            if j == k {
                local = sub;
            } else {
                coeff *= party.amplitudes()[sub];
            }
        }
        (local, coeff)
    };
    let decomposed: Vec<(usize, Complex64)> = (0..d).map(split).collect();
    let mut data = vec![C_ZERO; 1 << (2 * m)];
    let ld = 1usize << m;
    for r in 0..d {
        let (a, ur) = decomposed[r];
        if ur == C_ZERO {
            continue;
        }
        let ur = ur.conj();
        for c in 0..d {
            let (b, uc) = decomposed[c];
            data[a * ld + b] += ur * w[(r, c)] * uc;
        }
    }
    let m_op = Operator::from_row_major(data).expect("local dimension is a power of two");
    // Cancel rounding asymmetry before diagonalizing.
    Operator::from_fn(m, |r, c| 0.5 * (m_op[(r, c)] + m_op[(c, r)].conj()))
}

fn sweep(
    w: &Operator,
    parties: &mut [StateVector],
    m: usize,
    direction: Direction,
    history: &mut Vec<f64>,
) -> f64 {
    let mut value = f64::NAN;
    for k in 0..parties.len() {
        let eff = effective_operator(w, parties, k, m);
        let eig = eig_hermitian(&eff).expect("effective operator is Hermitian");
        let (idx, v) = match direction {
            Direction::Maximize => (0, eig.max()),
            Direction::Minimize => (eig.values.len() - 1, eig.min()),
        };
        parties[k] = eig.vector(idx);
        value = v;
        history.push(v);
    }
    value
}

/// Runs one see-saw descent from `start` until the objective moves by less
/// than `tol` over a full sweep.
pub fn see_saw_from(
    w: &Operator,
    start: Vec<StateVector>,
    direction: Direction,
    tol: f64,
    max_sweeps: usize,
) -> Result<SeeSawRun> {
    if start.is_empty() {
        return Err(Error::InvalidArgument("no parties".into()));
    }
    let m = start[0].n_qubits();
    if start.iter().any(|p| p.n_qubits() != m) || m * start.len() != w.n_qubits() {
        return Err(Error::InvalidQubits(
            "party states do not tile the operator's qubits".into(),
        ));
    }
    w.ensure_hermitian(1e-10)?;
    let mut parties = start;
    let sign = match direction {
        Direction::Maximize => 1.0,
        Direction::Minimize => -1.0,
    };
    let initial = w.sandwich(&product(&parties), &product(&parties))?.re;
    let mut history = vec![initial];
    let mut prev = initial;
    let mut value = initial;
    for _ in 0..max_sweeps {
        value = sweep(w, &mut parties, m, direction, &mut history);
        if sign * (value - prev) < tol {
            break;
        }
        prev = value;
    }
    Ok(SeeSawRun {
        value,
        parties,
        history,
    })
}

/// Best see-saw run over `cfg.restarts` Haar-random product starts; restart
/// `i` draws from the stream derived from `(cfg.seed, i)`.
pub fn optimize_over_products(
    w: &Operator,
    n_parties: usize,
    direction: Direction,
    cfg: &SeeSawConfig,
) -> Result<SeeSawRun> {
    if cfg.restarts < 1 {
        return Err(Error::InvalidArgument(
            "see-saw needs at least one restart".into(),
        ));
    }
    let m = party_size(w.n_qubits(), n_parties)?;
    let mut best: Option<SeeSawRun> = None;
    for restart in 0..cfg.restarts {
        let mut rng = derived_rng(cfg.seed, restart as u64);
        let start = (0..n_parties).map(|_| haar_state(m, &mut rng)).collect();
        let run = see_saw_from(w, start, direction, cfg.tol, cfg.max_sweeps)?;
        let better = match (&best, direction) {
            (None, _) => true,
            (Some(b), Direction::Maximize) => run.value > b.value,
            (Some(b), Direction::Minimize) => run.value < b.value,
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let polished = see_saw_from(w, best.parties.clone(), direction, 0.0, POLISH_SWEEPS)?;
    Ok(match direction {
        Direction::Maximize if polished.value >= best.value => polished,
        Direction::Minimize if polished.value <= best.value => polished,
        _ => best,
    })
}

/// Extremal value of `tr[Wσ]` over product states of `n_parties` equal parties.
pub fn extremum_over_products(
    w: &Operator,
    n_parties: usize,
    direction: Direction,
    cfg: &SeeSawConfig,
) -> Result<f64> {
    Ok(optimize_over_products(w, n_parties, direction, cfg)?.value)
}

pub fn separability_window_with(
    w_tilde: &Operator,
    n_parties: usize,
    cfg: &SeeSawConfig,
) -> Result<Window> {
    let lower = extremum_over_products(w_tilde, n_parties, Direction::Minimize, cfg)?;
    let upper = extremum_over_products(w_tilde, n_parties, Direction::Maximize, cfg)?;
    Window::new(lower, upper)
}

/// Separability window with the default seed and sweep limit.
pub fn separability_window(
    w_tilde: &Operator,
    n_parties: usize,
    restarts: usize,
    tol: f64,
) -> Result<Window> {
    let cfg = SeeSawConfig {
        restarts,
        tol,
        ..SeeSawConfig::default()
    };
    separability_window_with(w_tilde, n_parties, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::pauli_string;
    use crate::linalg::random::random_hermitian;
    use crate::seed::rng_from_seed;

    #[test]
    fn identity_window_is_flat() {
        let w = Operator::identity(2).scale(0.25);
        let win = separability_window(&w, 2, 5, 1e-9).unwrap();
        assert!((win.lower - 0.25).abs() < 1e-12);
        assert!((win.upper - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_restarts_rejected() {
        let w = Operator::identity(2);
        assert!(matches!(
            separability_window(&w, 2, 0, 1e-9),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn uneven_parties_rejected() {
        let w = Operator::identity(3);
        assert!(matches!(
            separability_window(&w, 2, 1, 1e-9),
            Err(Error::InvalidQubits(_))
        ));
    }

    #[test]
    fn zz_window_is_unit() {
        let zz = pauli_string("ZZ").unwrap();
        let win = separability_window(&zz, 2, 20, 1e-12).unwrap();
        assert!((win.lower + 1.0).abs() < 1e-9);
        assert!((win.upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_party_window_is_spectrum() {
        let mut rng = rng_from_seed(11);
        let h = random_hermitian(2, &mut rng);
        let eig = eig_hermitian(&h).unwrap();
        let win = separability_window(&h, 1, 3, 1e-12).unwrap();
        assert!((win.lower - eig.min()).abs() < 1e-10);
        assert!((win.upper - eig.max()).abs() < 1e-10);
    }

    #[test]
    fn history_is_monotone() {
        let mut rng = rng_from_seed(5);
        let h = random_hermitian(3, &mut rng);
        for dir in [Direction::Maximize, Direction::Minimize] {
            let start = (0..3).map(|_| haar_state(1, &mut rng)).collect();
            let run = see_saw_from(&h, start, dir, 1e-12, 200).unwrap();
            for pair in run.history.windows(2) {
                match dir {
                    Direction::Maximize => assert!(pair[1] >= pair[0] - 1e-12),
                    Direction::Minimize => assert!(pair[1] <= pair[0] + 1e-12),
                }
            }
        }
    }
}
