//! Clause emission for every constraint family.
//!
//! Elision policy: a variable outside its defined domain is semantically
//! false. Instantiating a clause schema therefore *drops* a positive literal
//! on an undefined variable, and *skips* the whole clause when a negative
//! literal hits an undefined variable (that literal is true). A schema whose
//! literals all drop yields the empty clause, which makes the formula
//! trivially unsatisfiable.

use std::collections::{BTreeMap, HashSet};

use crate::cnf::{Clause, Cnf, EncodeFlags, Family};
use crate::graph::{adjacent_pairs, Graph, Instance};
use crate::vars::{Lit, VarMap};

pub use crate::vars::build_varmap;

/// Instantiates one schema clause under the elision policy.
struct ClauseBuilder<'a> {
    vm: &'a VarMap,
    literals: Vec<Lit>,
    satisfied: bool,
}

impl<'a> ClauseBuilder<'a> {
    fn new(vm: &'a VarMap) -> Self {
        ClauseBuilder {
            vm,
            literals: Vec::with_capacity(4),
            satisfied: false,
        }
    }

    fn pos_f(mut self, x: u32) -> Self {
        self.literals.push(Lit::positive(self.vm.f_var(x)));
        self
    }

    fn neg_f(mut self, x: u32) -> Self {
        self.literals.push(Lit::negative(self.vm.f_var(x)));
        self
    }

    fn pos_l(mut self, i: i64, x: i64) -> Self {
        if let Some(v) = self.vm.l_var_signed(i, x) {
            self.literals.push(Lit::positive(v));
        }
        self
    }

    fn neg_l(mut self, i: i64, x: i64) -> Self {
        match self.vm.l_var_signed(i, x) {
            Some(v) => self.literals.push(Lit::negative(v)),
            None => self.satisfied = true,
        }
        self
    }

    fn emit(self, family: Family, out: &mut Vec<Clause>) {
        if !self.satisfied {
            out.push(Clause::new(family, self.literals));
        }
    }
}

/// One clause `¬F(x) ∨ ¬F(y)` per pair of edges sharing a vertex.
pub fn emit_bfc(g: &Graph, vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    for (x, y) in adjacent_pairs(g).iter() {
        ClauseBuilder::new(vm)
            .neg_f(x)
            .neg_f(y)
            .emit(Family::Bfc, &mut out);
    }
    out
}

/// At most one index per edge: `¬L(i,x) ∨ ¬L(j,x)` for defined `i < j`.
/// The first edge's single pair carries its own tag.
pub fn emit_uniqueness(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    for x in 1..=vm.m() {
        let family = if x == 1 { Family::Eta3 } else { Family::Eta2 };
        let dom: Vec<u32> = vm.domain(x).collect();
        for (a, &i) in dom.iter().enumerate() {
            for &j in &dom[a + 1..] {
                ClauseBuilder::new(vm)
                    .neg_l(i as i64, x as i64)
                    .neg_l(j as i64, x as i64)
                    .emit(family, &mut out);
            }
        }
    }
    out
}

/// The first edge takes index one (matched) or zero (unmatched).
pub fn emit_first_edge(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    ClauseBuilder::new(vm)
        .pos_l(1, 1)
        .pos_l(0, 1)
        .emit(Family::Eta5, &mut out);
    out
}

/// Forward recursion: `¬L(i,x) ∨ L(i,x+1) ∨ L(i+1,x+1)`.
pub fn emit_forward(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    for x in 1..vm.m() {
        for i in vm.domain(x) {
            let (i, x) = (i as i64, x as i64);
            ClauseBuilder::new(vm)
                .neg_l(i, x)
                .pos_l(i, x + 1)
                .pos_l(i + 1, x + 1)
                .emit(Family::Eta8, &mut out);
        }
    }
    out
}

/// Successor restriction: `¬L(i,x) ∨ ¬L(j,x+1)` for every defined
/// `j ∉ {i, i+1}` in the successor's domain.
pub fn emit_forward_tighten(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    for x in 1..vm.m() {
        for i in vm.domain(x) {
            for j in vm.domain(x + 1) {
                if j == i || j == i + 1 {
                    continue;
                }
                ClauseBuilder::new(vm)
                    .neg_l(i as i64, x as i64)
                    .neg_l(j as i64, (x + 1) as i64)
                    .emit(Family::Eta9, &mut out);
            }
        }
    }
    out
}

/// `¬L(K-1,m-1) ∨ L(K,m)`: count K-1 at the next-to-last edge forces the
/// last edge to reach K.
pub fn emit_last_edge_forcing(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    let (m, k) = (vm.m() as i64, vm.k() as i64);
    if m >= 2 {
        ClauseBuilder::new(vm)
            .neg_l(k - 1, m - 1)
            .pos_l(k, m)
            .emit(Family::Eta10b, &mut out);
    }
    out
}

/// Couples the matched predicate to the index mapping:
/// η12/η13 pin the first edge, η14/η15 handle index zero, and η16/η18 read a
/// matched/unmatched edge off an index step/repeat.
pub fn emit_match_defs(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    let m = vm.m();
    ClauseBuilder::new(vm)
        .neg_l(1, 1)
        .pos_f(1)
        .emit(Family::Eta12, &mut out);
    ClauseBuilder::new(vm)
        .neg_l(0, 1)
        .neg_f(1)
        .emit(Family::Eta13, &mut out);
    for x in 2..m {
        ClauseBuilder::new(vm)
            .neg_l(0, x as i64)
            .neg_f(x)
            .emit(Family::Eta14, &mut out);
        ClauseBuilder::new(vm)
            .neg_l(0, x as i64)
            .pos_l(0, x as i64 - 1)
            .emit(Family::Eta15, &mut out);
    }
    // Extended through the last edge so F(m) stays coupled to the mapping.
    for x in 2..=m {
        for i in vm.domain(x) {
            if i == 0 {
                continue;
            }
            let (i, x) = (i as i64, x as i64);
            ClauseBuilder::new(vm)
                .neg_l(i, x)
                .neg_l(i - 1, x - 1)
                .pos_f(x as u32)
                .emit(Family::Eta16, &mut out);
            ClauseBuilder::new(vm)
                .neg_l(i, x)
                .neg_l(i, x - 1)
                .neg_f(x as u32)
                .emit(Family::Eta18, &mut out);
        }
    }
    out
}

/// Forward recursion phrased through the matched predicate (η8b/η8c), plus
/// the forced-last-edge pair η10d.
pub fn emit_forward_matched(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    let m = vm.m();
    for x in 1..m {
        // i = 0 included: an unmatched successor keeps index zero.
        for i in vm.domain(x) {
            let (i, x) = (i as i64, x as i64);
            ClauseBuilder::new(vm)
                .neg_l(i, x)
                .neg_f(x as u32 + 1)
                .pos_l(i + 1, x + 1)
                .emit(Family::Eta8b, &mut out);
            ClauseBuilder::new(vm)
                .neg_l(i, x)
                .pos_f(x as u32 + 1)
                .pos_l(i, x + 1)
                .emit(Family::Eta8c, &mut out);
        }
    }
    if m >= 2 {
        let (m64, k) = (m as i64, vm.k() as i64);
        ClauseBuilder::new(vm)
            .neg_l(k - 1, m64 - 1)
            .pos_f(m)
            .emit(Family::Eta10d, &mut out);
        ClauseBuilder::new(vm)
            .neg_l(k - 1, m64 - 1)
            .pos_l(k, m64)
            .emit(Family::Eta10d, &mut out);
    }
    out
}

/// Backward recursion η22/η23 and the flat-level cascade η24.
pub fn emit_backward(vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    for x in 2..=vm.m() {
        for i in vm.domain(x) {
            if i == 0 {
                continue;
            }
            let (i, x64) = (i as i64, x as i64);
            ClauseBuilder::new(vm)
                .neg_l(i, x64)
                .neg_f(x)
                .pos_l(i - 1, x64 - 1)
                .emit(Family::Eta22, &mut out);
            ClauseBuilder::new(vm)
                .neg_l(i, x64)
                .pos_f(x)
                .pos_l(i, x64 - 1)
                .emit(Family::Eta23, &mut out);
        }
    }
    for p in 2..=vm.m() as i64 {
        if vm.l_defined(p, p) {
            ClauseBuilder::new(vm)
                .neg_l(p, p)
                .pos_l(p - 1, p - 1)
                .emit(Family::Eta24, &mut out);
        }
    }
    out
}

/// Optional embedding of the adjacency rule into the index mapping.
pub fn emit_bfc_embedding(g: &Graph, vm: &VarMap) -> Vec<Clause> {
    let mut out = Vec::new();
    let pairs = adjacent_pairs(g);
    for (x, y) in pairs.iter() {
        for i in vm.domain(x) {
            if i == 0 {
                continue;
            }
            for j in vm.domain(y) {
                if j <= i {
                    continue;
                }
                let (i, j, x64, y64) = (i as i64, j as i64, x as i64, y as i64);
                ClauseBuilder::new(vm)
                    .neg_l(i, x64)
                    .neg_l(j, y64)
                    .pos_l(i, x64 - 1)
                    .pos_l(j, y64 - 1)
                    .emit(Family::Eta25, &mut out);
                ClauseBuilder::new(vm)
                    .neg_l(i, x64)
                    .neg_l(j, y64)
                    .neg_f(x)
                    .neg_f(y)
                    .emit(Family::Eta26, &mut out);
            }
        }
    }
    for (_, y) in pairs.iter() {
        let y = y as i64;
        if vm.l_defined(y, y) {
            ClauseBuilder::new(vm)
                .neg_l(y, y)
                .emit(Family::Eta27, &mut out);
        }
    }
    out
}

/// Emits the full constraint system for an instance: all families in a fixed
/// order, tallied per family, then deduplicated on literal sets (the first
/// occurrence keeps its tag). Deterministic for fixed input and flags.
pub fn encode(inst: &Instance, flags: EncodeFlags) -> Cnf {
    let vm = build_varmap(inst, flags);
    let g = &inst.graph;

    let mut raw: Vec<Clause> = Vec::new();
    raw.extend(emit_bfc(g, &vm));
    if flags.include_redundant {
        raw.extend(emit_uniqueness(&vm));
    }
    raw.extend(emit_first_edge(&vm));
    // An edge with no admissible index collapses the whole formula: the
    // at-least-one-index requirement degenerates to the empty clause.
    for _ in vm.edges_with_empty_domain() {
        raw.push(Clause::new(Family::Eta5, Vec::new()));
    }
    raw.extend(emit_forward(&vm));
    raw.extend(emit_forward_tighten(&vm));
    raw.extend(emit_last_edge_forcing(&vm));
    raw.extend(emit_match_defs(&vm));
    raw.extend(emit_forward_matched(&vm));
    raw.extend(emit_backward(&vm));
    if flags.embed_bfc {
        raw.extend(emit_bfc_embedding(g, &vm));
    }

    let mut family_counts: BTreeMap<Family, usize> = BTreeMap::new();
    let mut seen: HashSet<[i32; 4]> = HashSet::with_capacity(raw.len());
    let mut clauses: Vec<Clause> = Vec::with_capacity(raw.len());
    for clause in raw {
        *family_counts.entry(clause.family()).or_insert(0) += 1;
        if seen.insert(clause.fixed_key()) {
            clauses.push(clause);
        }
    }
    Cnf::new(vm, clauses, flags, family_counts)
}
