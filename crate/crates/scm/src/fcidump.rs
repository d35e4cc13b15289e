//! FCIDUMP reader and writer.
//!
//! ```text
//!  &FCI NORB=2,NELEC=2,MS2=0,
//!   ORBSYM=1,6,
//!   ISYM=1,
//!  &END
//!  0.675710154803517    1    1    1    1
//!  ...
//! ```
//!
//! Integral lines are `value i j k l` with 1-based indices: all four set
//! for `(ij|kl)`, `i j 0 0` for `h(i,j)`, `0 0 0 0` for the scalar constant.
//! `i 0 0 0` lines (orbital energies) are accepted and ignored.

use std::fmt::Write as _;
use std::path::Path;

use scm_core::pointgroup::{PointGroupTable, D2H};
use scm_core::IntegralSet;

use crate::error::{CliError, ParseError};

/// Header fields of an FCIDUMP namelist.
#[derive(Debug, Clone, PartialEq)]
pub struct FcidumpHeader {
    pub norb: usize,
    pub nelec: u32,
    pub ms2: i32,
    pub orbsym: Vec<u32>,
    pub isym: u32,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_number(tok: &str, line: usize) -> Result<f64, ParseError> {
    let t = tok.replace(['D', 'd'], "E");
    t.parse::<f64>()
        .map_err(|_| err(line, format!("malformed numeric literal `{tok}`")))
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.trim()
        .parse::<T>()
        .map_err(|_| err(line, format!("malformed {what} value `{tok}`")))
}

/// Splits the input into the header namelist and the first body line.
fn split_header(text: &str) -> Result<(String, usize, usize), ParseError> {
    let mut header = String::new();
    let mut started = false;
    let mut header_line = 1;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if !started {
            if trimmed.is_empty() {
                continue;
            }
            let upper = trimmed.to_ascii_uppercase();
            if !upper.starts_with("&FCI") {
                return Err(err(lineno, "expected `&FCI` header"));
            }
            started = true;
            header_line = lineno;
            let rest = &trimmed[4..];
            if let Some(end) = find_end(rest) {
                header.push_str(&rest[..end]);
                return Ok((header, header_line, lineno + 1));
            }
            header.push_str(rest);
            header.push(' ');
        } else if let Some(end) = find_end(trimmed) {
            header.push_str(&trimmed[..end]);
            return Ok((header, header_line, lineno + 1));
        } else {
            header.push_str(trimmed);
            header.push(' ');
        }
    }
    if started {
        Err(err(
            header_line,
            "unterminated header (missing `&END` or `/`)",
        ))
    } else {
        Err(err(1, "empty input, expected `&FCI` header"))
    }
}

fn find_end(s: &str) -> Option<usize> {
    let upper = s.to_ascii_uppercase();
    upper.find("&END").or_else(|| {
        let t = upper.trim_end();
        t.ends_with('/').then(|| t.len() - 1)
    })
}

fn parse_header(text: &str, line: usize) -> Result<FcidumpHeader, ParseError> {
    let mut fields: Vec<(String, Vec<String>)> = Vec::new();
    for tok in text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Some((key, value)) = tok.split_once('=') {
            let mut values = Vec::new();
            if !value.is_empty() {
                values.push(value.to_string());
            }
            fields.push((key.trim().to_ascii_uppercase(), values));
        } else if let Some((_, values)) = fields.last_mut() {
            values.push(tok.to_string());
        } else {
            return Err(err(line, format!("unexpected token `{tok}` in header")));
        }
    }
    let get = |key: &str| fields.iter().find(|(k, _)| k == key).map(|(_, v)| v);
    let single = |key: &str| -> Result<&String, ParseError> {
        match get(key) {
            Some(v) if v.len() == 1 => Ok(&v[0]),
            Some(_) => Err(err(
                line,
                format!("header field {key} needs exactly one value"),
            )),
            None => Err(err(line, format!("missing header field {key}"))),
        }
    };
    let norb: usize = parse_int(single("NORB")?, line, "NORB")?;
    let nelec: u32 = parse_int(single("NELEC")?, line, "NELEC")?;
    let ms2: i32 = match get("MS2") {
        Some(_) => parse_int(single("MS2")?, line, "MS2")?,
        None => return Err(err(line, "missing header field MS2")),
    };
    let orbsym = get("ORBSYM")
        .ok_or_else(|| err(line, "missing header field ORBSYM"))?
        .iter()
        .map(|v| parse_int::<u32>(v, line, "ORBSYM"))
        .collect::<Result<Vec<_>, _>>()?;
    if orbsym.len() != norb {
        return Err(err(
            line,
            format!("ORBSYM lists {} entries for NORB={norb}", orbsym.len()),
        ));
    }
    let isym = match get("ISYM") {
        Some(_) => parse_int(single("ISYM")?, line, "ISYM")?,
        None => 1,
    };
    Ok(FcidumpHeader {
        norb,
        nelec,
        ms2,
        orbsym,
        isym,
    })
}

/// Parses FCIDUMP text, labelling orbitals with D2h irreps.
pub fn parse_fcidump(text: &str) -> Result<IntegralSet, ParseError> {
    parse_fcidump_with(text, &D2H).map(|(_, ints)| ints)
}

/// Parses FCIDUMP text; `ORBSYM` entries are interpreted in `group`.
pub fn parse_fcidump_with(
    text: &str,
    group: &'static PointGroupTable,
) -> Result<(FcidumpHeader, IntegralSet), ParseError> {
    let (header_text, header_line, body_start) = split_header(text)?;
    let header = parse_header(&header_text, header_line)?;
    if header.norb > scm_core::fock::MAX_ORBITALS {
        return Err(err(
            header_line,
            format!("NORB={} is too large", header.norb),
        ));
    }
    let irreps = header
        .orbsym
        .iter()
        .map(|&s| group.from_orbsym(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            err(
                header_line,
                format!("ORBSYM entry out of range for {}", group.name),
            )
        })?;
    let mut ints = IntegralSet::zeros(irreps, header.nelec, header.ms2)
        .map_err(|e| err(header_line, e.to_string()))?;
    let norb = header.norb;
    for (idx, line) in text.lines().enumerate().skip(body_start - 1) {
        let lineno = idx + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(err(
                lineno,
                format!("expected `value i j k l`, found {} fields", toks.len()),
            ));
        }
        let value = parse_number(toks[0], lineno)?;
        let mut idx4 = [0usize; 4];
        for (slot, tok) in idx4.iter_mut().zip(&toks[1..]) {
            let v: usize = parse_int(tok, lineno, "orbital index")?;
            if v > norb {
                return Err(err(
                    lineno,
                    format!("orbital index {v} out of range 0..={norb}"),
                ));
            }
            *slot = v;
        }
        match idx4 {
            [0, 0, 0, 0] => ints.constant = value,
            [i, j, 0, 0] if i > 0 && j > 0 => ints.set_one(i - 1, j - 1, value),
            [_, 0, 0, 0] => {}
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_two(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(err(lineno, format!("invalid index pattern {idx4:?}")));
            }
        }
    }
    Ok((header, ints))
}

/// Reads and parses a file, attaching the path to errors.
pub fn read_fcidump(
    path: &Path,
    group: &'static PointGroupTable,
) -> Result<(FcidumpHeader, IntegralSet), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_fcidump_with(&text, group).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Serializes integrals, writing each symmetry-unique nonzero once.
pub fn write_fcidump(ints: &IntegralSet, isym: u32) -> String {
    let n = ints.norb();
    let mut out = String::new();
    let orbsym: Vec<String> = ints
        .orbital_irreps()
        .iter()
        .map(|g| g.orbsym().to_string())
        .collect();
    let _ = writeln!(
        out,
        " &FCI NORB={n},NELEC={},MS2={},\n  ORBSYM={},\n  ISYM={isym},\n &END",
        ints.nelec,
        ints.ms2,
        orbsym.join(",")
    );
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if pair(p, q) < pair(r, s) {
                        continue;
                    }
                    let v = ints.two(p, q, r, s);
                    if v != 0.0 {
                        let _ = writeln!(out, " {v:.17e} {} {} {} {}", p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = ints.one(p, q);
            if v != 0.0 {
                let _ = writeln!(out, " {v:.17e} {} {} 0 0", p + 1, q + 1);
            }
        }
    }
    let _ = writeln!(out, " {:.17e} 0 0 0 0", ints.constant);
    out
}
