//! DIMACS CNF rendering and parsing.
//!
//! The writer prefixes the formula with a comment legend (variable identity
//! and per-family emission counts) so third-party solvers can be used for
//! cross-validation without losing track of what the variables mean.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Cnf, Family};
use crate::vars::Lit;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: expected header \"p cnf <vars> <clauses>\", got {content:?}")]
    BadHeader { line: usize, content: String },
    #[error("missing \"p cnf\" header")]
    MissingHeader,
    #[error("line {line}: unreadable literal {token:?}")]
    BadLiteral { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {vars}")]
    LiteralOutOfRange { line: usize, lit: i32, vars: u32 },
    #[error("clause count mismatch: header says {expected}, found {found}")]
    ClauseCountMismatch { expected: usize, found: usize },
}

/// Renders the formula in DIMACS CNF format, deterministically.
pub fn to_dimacs(cnf: &Cnf) -> String {
    let mut out = String::new();
    let vm = cnf.varmap();
    for v in 1..=vm.total_vars() {
        let _ = writeln!(out, "c var {v} = {}", vm.name(v));
    }
    for family in Family::ALL {
        let _ = writeln!(out, "c family {family} count={}", cnf.family_count(family));
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.len());
    for clause in cnf.clauses() {
        let _ = writeln!(out, "{clause}");
    }
    out
}

/// A formula stripped of family and variable-identity information, as read
/// back from DIMACS text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

/// Parses DIMACS CNF text. Comments and blank lines are skipped; clauses may
/// span lines and are terminated by `0`.
pub fn parse_dimacs(text: &str) -> Result<RawCnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut open = false; // a clause may be mid-assembly across lines

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = (|| {
                if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                    return None;
                }
                let vars: u32 = fields[2].parse().ok()?;
                let n_clauses: usize = fields[3].parse().ok()?;
                Some((vars, n_clauses))
            })();
            header = Some(parsed.ok_or_else(|| DimacsError::BadHeader {
                line: line_no,
                content: line.to_string(),
            })?);
            continue;
        }
        let (vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for token in line.split_whitespace() {
            let value: i32 = token.parse().map_err(|_| DimacsError::BadLiteral {
                line: line_no,
                token: token.to_string(),
            })?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                open = false;
            } else {
                if value.unsigned_abs() > vars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: line_no,
                        lit: value,
                        vars,
                    });
                }
                current.push(Lit::from_dimacs(value).expect("nonzero"));
                open = true;
            }
        }
    }
    let (num_vars, expected) = header.ok_or(DimacsError::MissingHeader)?;
    if open {
        clauses.push(current);
    }
    if clauses.len() != expected {
        return Err(DimacsError::ClauseCountMismatch {
            expected,
            found: clauses.len(),
        });
    }
    Ok(RawCnf { num_vars, clauses })
}
