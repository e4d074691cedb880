use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Window, WitnessBundle};
use crate::error::{Error, Result};
use crate::json::to_json_string;
use crate::linalg::Operator;

pub const WITNESS_FORMAT: &str = "ewc-witness-bundle/1";

type DenseRows = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct BundleDoc {
    format: String,
    label: String,
    n_qubits: usize,
    p: f64,
    q: f64,
    window: Window,
    w_plus: DenseRows,
    w_minus: DenseRows,
    w_tilde: DenseRows,
}

fn to_rows(op: &Operator) -> DenseRows {
    (0..op.dim())
        .map(|r| {
            (0..op.dim())
                .map(|c| [op[(r, c)].re, op[(r, c)].im])
                .collect()
        })
        .collect()
}

fn from_rows(rows: &DenseRows, name: &str, n_qubits: usize) -> Result<Operator> {
    let dim = 1usize << n_qubits;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Format(format!(
            "{name} must be a {dim}x{dim} matrix of [re, im] pairs"
        )));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Operator::from_row_major(entries)
}

/// JSON document with every float written to 17 significant digits.
pub fn bundle_to_json(bundle: &WitnessBundle) -> Result<String> {
    let doc = BundleDoc {
        format: WITNESS_FORMAT.to_string(),
        label: bundle.label.clone(),
        n_qubits: bundle.n_qubits,
        p: bundle.p,
        q: bundle.q,
        window: bundle.window,
        w_plus: to_rows(&bundle.w_plus),
        w_minus: to_rows(&bundle.w_minus),
        w_tilde: to_rows(&bundle.w_tilde),
    };
    to_json_string(&doc)
}

/// Parses and validates a bundle document.
pub fn bundle_from_json(text: &str) -> Result<WitnessBundle> {
    let doc: BundleDoc = serde_json::from_str(text)?;
    if doc.format != WITNESS_FORMAT {
        return Err(Error::Format(format!(
            "unsupported witness format {:?}",
            doc.format
        )));
    }
    if doc.n_qubits == 0 || doc.n_qubits > 8 {
        return Err(Error::Format(format!(
            "n_qubits = {} is out of range",
            doc.n_qubits
        )));
    }
    let bundle = WitnessBundle {
        w_plus: from_rows(&doc.w_plus, "w_plus", doc.n_qubits)?,
        w_minus: from_rows(&doc.w_minus, "w_minus", doc.n_qubits)?,
        w_tilde: from_rows(&doc.w_tilde, "w_tilde", doc.n_qubits)?,
        label: doc.label,
        n_qubits: doc.n_qubits,
        p: doc.p,
        q: doc.q,
        window: doc.window,
    };
    bundle.validate()?;
    Ok(bundle)
}
