//! Propositional variable bookkeeping.
//!
//! Two unknown predicates drive the encoding: `F(x)` ("edge x is matched")
//! and `L(i, x)` ("the running count of matched edges at edge x equals i").
//! Only part of the `L` grid exists as variables; everything outside the
//! defined domain is semantically false and is elided from clauses.

use std::fmt;

use crate::cnf::EncodeFlags;
use crate::graph::Instance;

pub type VarId = u32;

/// A signed variable id. Positive means the variable is asserted true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(i32);

impl Lit {
    pub fn positive(v: VarId) -> Lit {
        debug_assert!(v > 0);
        Lit(v as i32)
    }

    pub fn negative(v: VarId) -> Lit {
        debug_assert!(v > 0);
        Lit(-(v as i32))
    }

    pub fn var(self) -> VarId {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn from_dimacs(raw: i32) -> Option<Lit> {
        if raw == 0 {
            None
        } else {
            Some(Lit(raw))
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Human-readable identity of a variable, used for the DIMACS legend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarName {
    F { x: u32 },
    L { i: u32, x: u32 },
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::F { x } => write!(f, "F({x})"),
            VarName::L { i, x } => write!(f, "L({i},{x})"),
        }
    }
}

/// Total bookkeeping of which variables exist.
///
/// Ids are consecutive from 1: first the `F` block (`F(x) = x`), then the
/// `L` block in lexicographic `(x, i)` order. Per-edge index domains are
/// contiguous intervals, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    m: u32,
    k: u32,
    /// Per edge (index 0 unused): `Some((lo, hi))` inclusive, or `None` when empty.
    domains: Vec<Option<(u32, u32)>>,
    /// Var id of `L(lo, x)` for each edge with a nonempty domain.
    l_base: Vec<u32>,
    total: u32,
}

/// Defined index interval for one edge.
///
/// Base rules: indices never exceed the edge id, and the last edge only
/// carries indices in `[K, m]`. With `tighten` the interval is further
/// intersected with the count-feasibility ranges: edge `m - t` (for
/// `t <= K`) only carries `[K - t, m - t]`, and an index `i <= K` is only
/// carried by edges in `[i, m - K + i]`.
fn edge_domain(x: u32, m: u32, k: u32, tighten: bool) -> Option<(u32, u32)> {
    let (mut lo, hi) = (0i64, x as i64);
    if x == m {
        lo = lo.max(k as i64);
    }
    if tighten {
        let t = (m - x) as i64;
        if t <= k as i64 {
            lo = lo.max(k as i64 - t);
        }
        // i <= K requires x <= m - K + i, i.e. i >= K + x - m; larger i are
        // already above K so the bound is monotone and safe to apply whole.
        lo = lo.max(k as i64 + x as i64 - m as i64);
    }
    if lo > hi {
        None
    } else {
        Some((lo as u32, hi as u32))
    }
}

/// Materializes the variable domains for an instance.
pub fn build_varmap(inst: &Instance, flags: EncodeFlags) -> VarMap {
    let m = inst.graph.m();
    let k = inst.k;
    let mut domains = vec![None; m as usize + 1];
    let mut l_base = vec![0u32; m as usize + 1];
    let mut next = m + 1; // F block occupies 1..=m
    for x in 1..=m {
        let dom = edge_domain(x, m, k, flags.tighten_ranges);
        domains[x as usize] = dom;
        if let Some((lo, hi)) = dom {
            l_base[x as usize] = next;
            next += hi - lo + 1;
        }
    }
    VarMap {
        m,
        k,
        domains,
        l_base,
        total: next - 1,
    }
}

impl VarMap {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn total_vars(&self) -> u32 {
        self.total
    }

    pub fn f_var(&self, x: u32) -> VarId {
        debug_assert!(x >= 1 && x <= self.m);
        x
    }

    /// Inclusive index bounds for edge `x`, or `None` for an empty domain.
    pub fn domain_bounds(&self, x: u32) -> Option<(u32, u32)> {
        self.domains[x as usize]
    }

    pub fn domain(&self, x: u32) -> impl Iterator<Item = u32> {
        let (lo, hi) = match self.domains[x as usize] {
            Some((lo, hi)) => (lo, hi),
            None => (1, 0),
        };
        lo..=hi
    }

    /// Edges whose index domain is empty (they make the formula trivially
    /// unsatisfiable, e.g. when `K > m`).
    pub fn edges_with_empty_domain(&self) -> Vec<u32> {
        (1..=self.m)
            .filter(|&x| self.domains[x as usize].is_none())
            .collect()
    }

    pub fn l_defined(&self, i: i64, x: i64) -> bool {
        self.l_var_signed(i, x).is_some()
    }

    pub fn l_var(&self, i: u32, x: u32) -> Option<VarId> {
        self.l_var_signed(i as i64, x as i64)
    }

    /// Signed lookup so callers can form `i - 1` / `x - 1` without underflow
    /// checks; anything off-grid is simply undefined.
    pub fn l_var_signed(&self, i: i64, x: i64) -> Option<VarId> {
        if x < 1 || x > self.m as i64 || i < 0 {
            return None;
        }
        let (lo, hi) = self.domains[x as usize]?;
        if i < lo as i64 || i > hi as i64 {
            return None;
        }
        Some(self.l_base[x as usize] + (i as u32 - lo))
    }

    /// Identity of a variable id, for legends and diagnostics.
    pub fn name(&self, v: VarId) -> VarName {
        debug_assert!(v >= 1 && v <= self.total);
        if v <= self.m {
            return VarName::F { x: v };
        }
        for x in 1..=self.m {
            if let Some((lo, hi)) = self.domains[x as usize] {
                let base = self.l_base[x as usize];
                if v >= base && v <= base + (hi - lo) {
                    return VarName::L {
                        i: lo + (v - base),
                        x,
                    };
                }
            }
        }
        unreachable!("var id {v} out of range")
    }
}
