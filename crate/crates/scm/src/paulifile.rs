//! Text form of a Pauli sum: one `<coeff> <label>` term per line, qubit 1
//! leftmost in the label. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use scm_core::{PauliString, PauliSum};

use crate::error::ParseError;

pub fn write_pauli_sum(sum: &PauliSum) -> String {
    let mut out = String::new();
    for t in sum.terms() {
        let _ = writeln!(out, "{:.17e} {}", t.coeff, t.label());
    }
    out
}

pub fn parse_pauli_sum(text: &str) -> Result<PauliSum, ParseError> {
    let mut terms = Vec::new();
    let mut qubits: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let term: PauliString = line.parse().map_err(|e: scm_core::Error| ParseError {
            line: idx + 1,
            message: e.to_string(),
        })?;
        match qubits {
            Some(q) if q != term.qubits() => {
                return Err(ParseError {
                    line: idx + 1,
                    message: format!(
                        "label has {} qubits, previous terms have {q}",
                        term.qubits()
                    ),
                })
            }
            _ => qubits = Some(term.qubits()),
        }
        terms.push(term);
    }
    PauliSum::new(qubits.unwrap_or(0) as u32, terms).map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let s = parse_pauli_sum("# header\n-1.5 II\n0.25 ZX # trailing\n\n").unwrap();
        assert_eq!(s.qubits(), 2);
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms()[1].label(), "ZX");
    }

    #[test]
    fn mismatched_lengths() {
        let e = parse_pauli_sum("1 ZZ\n1 Z\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn round_trip_is_exact() {
        let s = parse_pauli_sum("0.1 XY\n-3.3333333333333335 ZI\n1e-13 YY\n").unwrap();
        assert_eq!(parse_pauli_sum(&write_pauli_sum(&s)).unwrap(), s);
    }
}
