//! Text format: a `qubits <n>` header followed by one gate per line, `#`
//! starting a comment.
//!
//! ```text
//! qubits 2
//! h 0        # Hadamard
//! cx 0 1
//! ```

use super::{Circuit, Gate, MAX_WIDTH};
use crate::error::{ParseError, Result};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content
        .char_indices()
        .chain(std::iter::once((content.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    tokens
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

fn parse_wire(
    tok: &Token<'_>,
    line: usize,
    width: usize,
) -> std::result::Result<usize, ParseError> {
    let w: usize = tok.text.parse().map_err(|_| {
        err(
            line,
            tok.column,
            format!("malformed wire index {:?}", tok.text),
        )
    })?;
    if w >= width {
        return Err(err(
            line,
            tok.column,
            format!("wire {w} out of range for {width} qubits"),
        ));
    }
    Ok(w)
}

fn parse_angle(tok: &Token<'_>, line: usize) -> std::result::Result<f64, ParseError> {
    match tok.text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(err(
            line,
            tok.column,
            format!("malformed number {:?}", tok.text),
        )),
    }
}

/// `(wire count, angle count)` of a mnemonic.
fn signature(mnemonic: &str) -> Option<(usize, usize)> {
    Some(match mnemonic {
        "h" | "x" | "y" | "z" => (1, 0),
        "rx" | "ry" | "rz" => (1, 1),
        "cx" => (2, 0),
        "ccx" => (3, 0),
        "cu" => (2, 4),
        _ => return None,
    })
}

fn build(mnemonic: &str, w: &[usize], a: &[f64]) -> Gate {
    match mnemonic {
        "h" => Gate::H(w[0]),
        "x" => Gate::X(w[0]),
        "y" => Gate::Y(w[0]),
        "z" => Gate::Z(w[0]),
        "rx" => Gate::Rx(w[0], a[0]),
        "ry" => Gate::Ry(w[0], a[0]),
        "rz" => Gate::Rz(w[0], a[0]),
        "cx" => Gate::Cx(w[0], w[1]),
        "ccx" => Gate::Ccx(w[0], w[1], w[2]),
        "cu" => Gate::Cu {
            control: w[0],
            target: w[1],
            alpha: a[0],
            beta: a[1],
            gamma: a[2],
            delta: a[3],
        },
        _ => unreachable!("signature checked"),
    }
}

/// Parses the gate-list format; diagnostics carry 1-based line and column.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let tokens = tokenize(line);
        let Some(head) = tokens.first() else {
            continue;
        };
        let mnemonic = head.text.to_ascii_lowercase();
        let Some(c) = circuit.as_mut() else {
            if mnemonic != "qubits" {
                return Err(err(lineno, head.column, "expected `qubits <n>` header").into());
            }
            let Some(n_tok) = tokens.get(1) else {
                return Err(err(lineno, head.column, "missing qubit count").into());
            };
            let n: usize = n_tok.text.parse().map_err(|_| {
                err(
                    lineno,
                    n_tok.column,
                    format!("malformed qubit count {:?}", n_tok.text),
                )
            })?;
            if n == 0 || n > MAX_WIDTH {
                return Err(err(
                    lineno,
                    n_tok.column,
                    format!("qubit count {n} is outside 1..={MAX_WIDTH}"),
                )
                .into());
            }
            if let Some(extra) = tokens.get(2) {
                return Err(err(lineno, extra.column, "unexpected token after qubit count").into());
            }
            circuit = Some(Circuit::new(n)?);
            continue;
        };
        if mnemonic == "qubits" {
            return Err(err(lineno, head.column, "duplicate `qubits` header").into());
        }
        let Some((n_wires, n_angles)) = signature(&mnemonic) else {
            return Err(err(lineno, head.column, format!("unknown gate {:?}", head.text)).into());
        };
        let args = &tokens[1..];
        if args.len() != n_wires + n_angles {
            let column = args.get(n_wires + n_angles).map_or(
                line.split('#')
                    .next()
                    .unwrap_or("")
                    .trim_end()
                    .chars()
                    .count()
                    + 1,
                |t| t.column,
            );
            return Err(err(
                lineno,
                column,
                format!(
                    "`{mnemonic}` takes {n_wires} wire(s) and {n_angles} angle(s), got {} argument(s)",
                    args.len()
                ),
            )
            .into());
        }
        let mut wires = Vec::with_capacity(n_wires);
        for tok in &args[..n_wires] {
            let w = parse_wire(tok, lineno, c.width())?;
            if wires.contains(&w) {
                return Err(err(lineno, tok.column, format!("duplicate wire {w}")).into());
            }
            wires.push(w);
        }
        let angles = args[n_wires..]
            .iter()
            .map(|t| parse_angle(t, lineno))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        c.push(build(&mnemonic, &wires, &angles))?;
    }
    circuit.ok_or_else(|| err(last_line.max(1), 1, "missing `qubits <n>` header").into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn parse_err(text: &str) -> ParseError {
        match parse_circuit(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bell_prep() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1").unwrap();
        assert_eq!(c.width(), 2);
        assert_eq!(c.gates(), &[Gate::H(0), Gate::Cx(0, 1)]);
    }

    #[test]
    fn single_rotation() {
        let c = parse_circuit("qubits 1\nry 0 1.23096").unwrap();
        assert_eq!(c.gates(), &[Gate::Ry(0, 1.23096)]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_circuit("# prep\n\nqubits 3   # header\n  ccx 0 1 2 # toffoli\n").unwrap();
        assert_eq!(c.gates(), &[Gate::Ccx(0, 1, 2)]);
    }

    #[test]
    fn duplicate_wires() {
        let e = parse_err("qubits 2\ncx 0 0");
        assert_eq!((e.line, e.column), (2, 6));
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn diagnostics_locate_token() {
        let e = parse_err("qubits 2\nh 0\n  foo 1");
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_err("qubits 2\nrx 1 abc");
        assert_eq!((e.line, e.column), (2, 6));
        let e = parse_err("qubits 2\nx 2");
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_err("qubits 2\nrz 0 inf");
        assert!(e.message.contains("malformed number"));
        let e = parse_err("h 0");
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_err("qubits 2\ncx 0");
        assert_eq!((e.line, e.column), (2, 5));
        assert!(matches!(parse_circuit(""), Err(Error::Parse(_))));
    }

    #[test]
    fn render_round_trip() {
        let text = "qubits 3\nh 0\nrx 1 -0.25\ncu 0 2 0.1 0.2 0.30000000000000004 -4\nccx 2 1 0\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(parse_circuit(&c.render()).unwrap(), c);
    }
}
