//! Decoding satisfying assignments into matching certificates and checking
//! them against the problem statement, independently of the solver.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::Cnf;
use crate::graph::Graph;
use crate::solve::Assignment;

/// The verifiable witness: the matched edge set, the per-edge running-count
/// table read off the assignment, and the threshold it was solved for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub matched: BTreeSet<u32>,
    /// `index_table[x - 1]` is the index assigned to edge `x`.
    pub index_table: Vec<u32>,
    pub k: u32,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("edge {edge} has no true index variable")]
    NoIndex { edge: u32 },
    #[error("edge {edge} has duplicate indices {first} and {second}")]
    DuplicateIndex { edge: u32, first: u32, second: u32 },
    #[error("variable {var} is unassigned")]
    Unassigned { var: u32 },
}

/// Reads the matching directly off the `F` block and the index table off the
/// `L` block. Exactly one index per edge must be true; anything else is an
/// encoder or solver bug surfaced as an error.
pub fn decode(cnf: &Cnf, asn: &Assignment) -> Result<MatchingCertificate, DecodeError> {
    let vm = cnf.varmap();
    let mut matched = BTreeSet::new();
    for x in 1..=vm.m() {
        let v = vm.f_var(x);
        match asn.value(v) {
            Some(true) => {
                matched.insert(x);
            }
            Some(false) => {}
            None => return Err(DecodeError::Unassigned { var: v }),
        }
    }
    let mut index_table = Vec::with_capacity(vm.m() as usize);
    for x in 1..=vm.m() {
        let mut found: Option<u32> = None;
        for i in vm.domain(x) {
            let v = vm
                .l_var(i, x)
                .expect("domain iteration yields defined vars");
            match asn.value(v) {
                Some(true) => match found {
                    None => found = Some(i),
                    Some(first) => {
                        return Err(DecodeError::DuplicateIndex {
                            edge: x,
                            first,
                            second: i,
                        })
                    }
                },
                Some(false) => {}
                None => return Err(DecodeError::Unassigned { var: v }),
            }
        }
        match found {
            Some(i) => index_table.push(i),
            None => return Err(DecodeError::NoIndex { edge: x }),
        }
    }
    Ok(MatchingCertificate {
        matched,
        index_table,
        k: vm.k(),
    })
}

/// The running-count recursion, straight from the definition: edge 1 maps to
/// one if matched else zero, and each later edge adds one exactly when it is
/// matched. This is the independent reference the decoded table is checked
/// against.
pub fn reconstruct_l(m: u32, matched: &BTreeSet<u32>) -> Vec<u32> {
    let mut table = Vec::with_capacity(m as usize);
    let mut count = 0u32;
    for x in 1..=m {
        if matched.contains(&x) {
            count += 1;
        }
        table.push(count);
    }
    table
}

/// A certificate invariant that failed verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Two matched edges share a vertex.
    AdjacentMatched { x: u32, y: u32 },
    /// Fewer matched edges than the threshold.
    TooFewMatched { found: usize, k: u32 },
    /// Decoded index differs from the recomputed running count.
    IndexMismatch {
        edge: u32,
        decoded: u32,
        recomputed: u32,
    },
    /// The first edge's index is outside {0, 1}.
    FirstIndexOutOfRange { index: u32 },
    /// An index step is not in {0, 1}, or disagrees with the matched flag.
    BadStep {
        edge: u32,
        from: u32,
        to: u32,
        matched: bool,
    },
    /// The last edge's index fell below the threshold.
    LastIndexBelowK { index: u32, k: u32 },
    /// A used index above an unused one (the running count cannot skip).
    InactiveIndexGap { index: u32 },
    /// Index zero usage must coincide with the first edge being unmatched.
    ZeroActivityMismatch {
        zero_used: bool,
        first_matched: bool,
    },
    /// Matched set mentions an edge outside the graph.
    UnknownEdge { edge: u32 },
    /// Table length differs from the edge count.
    TableLength { expected: u32, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AdjacentMatched { x, y } => {
                write!(f, "matched edges {x} and {y} share a vertex")
            }
            Violation::TooFewMatched { found, k } => {
                write!(f, "only {found} matched edges, need at least {k}")
            }
            Violation::IndexMismatch {
                edge,
                decoded,
                recomputed,
            } => write!(
                f,
                "edge {edge}: decoded index {decoded} but running count is {recomputed}"
            ),
            Violation::FirstIndexOutOfRange { index } => {
                write!(f, "first edge has index {index}, expected 0 or 1")
            }
            Violation::BadStep {
                edge,
                from,
                to,
                matched,
            } => write!(
                f,
                "edge {edge}: index step {from} -> {to} with matched={matched}"
            ),
            Violation::LastIndexBelowK { index, k } => {
                write!(f, "last edge index {index} is below K = {k}")
            }
            Violation::InactiveIndexGap { index } => {
                write!(
                    f,
                    "index {index} is used but a smaller positive index is not"
                )
            }
            Violation::ZeroActivityMismatch {
                zero_used,
                first_matched,
            } => write!(
                f,
                "index 0 used = {zero_used} but first edge matched = {first_matched}"
            ),
            Violation::UnknownEdge { edge } => write!(f, "matched edge {edge} is not in the graph"),
            Violation::TableLength { expected, found } => {
                write!(f, "index table has {found} entries, expected {expected}")
            }
        }
    }
}

/// Verification outcome; an empty violation list means the certificate is a
/// genuine witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

/// Checks every certificate invariant: the matching property, the threshold,
/// agreement of the decoded table with the direct recursion, step-wise
/// consistency, and the active-index rule.
pub fn verify(cert: &MatchingCertificate, g: &Graph) -> Verdict {
    let mut violations = Vec::new();
    let m = g.m();

    for &edge in &cert.matched {
        if edge == 0 || edge > m {
            violations.push(Violation::UnknownEdge { edge });
        }
    }
    let known: Vec<u32> = cert
        .matched
        .iter()
        .copied()
        .filter(|&e| e >= 1 && e <= m)
        .collect();

    // The matching property, checked against the graph itself.
    for (a, &x) in known.iter().enumerate() {
        for &y in &known[a + 1..] {
            let (ux, vx) = g.edge(x);
            let (uy, vy) = g.edge(y);
            if ux == uy || ux == vy || vx == uy || vx == vy {
                violations.push(Violation::AdjacentMatched { x, y });
            }
        }
    }

    if cert.matched.len() < cert.k as usize {
        violations.push(Violation::TooFewMatched {
            found: cert.matched.len(),
            k: cert.k,
        });
    }

    if cert.index_table.len() != m as usize {
        violations.push(Violation::TableLength {
            expected: m,
            found: cert.index_table.len(),
        });
        return Verdict { violations };
    }

    // Cross-validate the SAT-decoded table against the direct recursion.
    let recomputed = reconstruct_l(m, &cert.matched);
    for x in 1..=m {
        let (decoded, reference) = (cert.index_table[x as usize - 1], recomputed[x as usize - 1]);
        if decoded != reference {
            violations.push(Violation::IndexMismatch {
                edge: x,
                decoded,
                recomputed: reference,
            });
        }
    }

    let first = cert.index_table[0];
    if first > 1 {
        violations.push(Violation::FirstIndexOutOfRange { index: first });
    }
    for x in 1..m as usize {
        let (from, to) = (cert.index_table[x - 1], cert.index_table[x]);
        let matched = cert.matched.contains(&(x as u32 + 1));
        let expected_to = if matched { from + 1 } else { from };
        if to != expected_to {
            violations.push(Violation::BadStep {
                edge: x as u32 + 1,
                from,
                to,
                matched,
            });
        }
    }

    let last = *cert.index_table.last().unwrap();
    if last < cert.k {
        violations.push(Violation::LastIndexBelowK {
            index: last,
            k: cert.k,
        });
    }

    // Active-index rule: every positive index below a used one is used, and
    // index zero appears exactly when the first edge is unmatched.
    let used: BTreeSet<u32> = cert.index_table.iter().copied().collect();
    if let Some(&max) = used.iter().max() {
        for i in 1..max {
            if !used.contains(&i) {
                violations.push(Violation::InactiveIndexGap { index: i });
            }
        }
    }
    let zero_used = used.contains(&0);
    let first_matched = cert.matched.contains(&1);
    if zero_used == first_matched {
        violations.push(Violation::ZeroActivityMismatch {
            zero_used,
            first_matched,
        });
    }

    Verdict { violations }
}

/// Two-line text form used by golden-file tests and the command line.
pub fn certificate_to_text(cert: &MatchingCertificate) -> String {
    let matched: Vec<String> = cert.matched.iter().map(u32::to_string).collect();
    let index: Vec<String> = cert.index_table.iter().map(u32::to_string).collect();
    format!(
        "matched: {}\nindex: {}\n",
        matched.join(" "),
        index.join(" ")
    )
}
