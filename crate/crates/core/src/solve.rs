//! Complete DPLL search with unit propagation, plus clause-structure
//! analysis. Desk-scale instances need no conflict learning; correctness and
//! determinism are what matter here.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cnf::{Cnf, Family};
use crate::dimacs::{parse_dimacs, DimacsError, RawCnf};
use crate::vars::{Lit, VarId};

/// Truth values per variable id; total once a model is found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>, // index 0 unused
}

impl Assignment {
    pub fn empty(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![None; num_vars as usize + 1],
        }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn value(&self, v: VarId) -> Option<bool> {
        self.values[v as usize]
    }

    pub fn set(&mut self, v: VarId, b: bool) {
        self.values[v as usize] = Some(b);
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|b| b == lit.is_positive())
    }

    pub fn is_total(&self) -> bool {
        self.values[1..].iter().all(Option::is_some)
    }

    pub fn assigned_count(&self) -> usize {
        self.values[1..].iter().filter(|v| v.is_some()).count()
    }

    /// True when `self` agrees with `other` everywhere `other` is assigned.
    pub fn extends(&self, other: &Assignment) -> bool {
        other
            .values
            .iter()
            .enumerate()
            .skip(1)
            .all(|(v, val)| val.is_none() || self.values[v] == *val)
    }
}

/// Independent clause-evaluation pass; deliberately not the solver's own
/// bookkeeping.
pub fn evaluate(cnf: &Cnf, asn: &Assignment) -> bool {
    cnf.clauses()
        .iter()
        .all(|c| c.literals().iter().any(|&l| asn.lit_value(l) == Some(true)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(Assignment),
    Unsat,
    /// The configured step budget ran out; deliberately distinct from UNSAT.
    BudgetExhausted,
}

impl SolveStatus {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveStatus::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub stats: SolveStats,
}

/// Search knobs. `branch_order` is a variable priority list (a permutation
/// of the variable ids); the default branches on the lowest-numbered
/// unassigned variable. Polarity is always false-first, which biases the
/// search toward small matchings.
#[derive(Debug, Clone, Default)]
pub struct SolverConfig {
    pub budget: Option<u64>,
    pub branch_order: Option<Vec<VarId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationOutcome {
    Fixpoint(Assignment),
    /// Index of a falsified clause.
    Conflict {
        clause: usize,
    },
}

/// Closes `partial` under unit propagation; monotone by construction.
pub fn unit_propagate(cnf: &Cnf, partial: &Assignment) -> PropagationOutcome {
    let clauses: Vec<Vec<Lit>> = cnf
        .clauses()
        .iter()
        .map(|c| c.literals().to_vec())
        .collect();
    let mut engine = Engine::new(cnf.num_vars(), clauses);
    match engine.seed_and_propagate(partial) {
        Ok(()) => PropagationOutcome::Fixpoint(engine.snapshot()),
        Err(clause) => PropagationOutcome::Conflict { clause },
    }
}

pub fn solve(cnf: &Cnf) -> SolveResult {
    solve_with(cnf, &SolverConfig::default())
}

pub fn solve_with(cnf: &Cnf, config: &SolverConfig) -> SolveResult {
    let clauses: Vec<Vec<Lit>> = cnf
        .clauses()
        .iter()
        .map(|c| c.literals().to_vec())
        .collect();
    search(cnf.num_vars(), clauses, config)
}

pub fn solve_raw(raw: &RawCnf, config: &SolverConfig) -> SolveResult {
    search(raw.num_vars, raw.clauses.clone(), config)
}

/// Accepts DIMACS text directly so third-party CNFs (or re-parsed output of
/// the encoder) can be cross-checked.
pub fn solve_dimacs(text: &str) -> Result<SolveResult, DimacsError> {
    let raw = parse_dimacs(text)?;
    Ok(solve_raw(&raw, &SolverConfig::default()))
}

// ---------------------------------------------------------------------------
// Search engine: counter-based propagation over occurrence lists, explicit
// trail, chronological backtracking.
// ---------------------------------------------------------------------------

struct Engine {
    clauses: Vec<Vec<Lit>>,
    pos_occ: Vec<Vec<u32>>,
    neg_occ: Vec<Vec<u32>>,
    values: Vec<Option<bool>>,
    true_count: Vec<u32>,
    unassigned_count: Vec<u32>,
    trail: Vec<VarId>,
    queue: Vec<(Lit, usize)>, // implied literal and its reason clause
    propagations: u64,
}

impl Engine {
    fn new(num_vars: u32, clauses: Vec<Vec<Lit>>) -> Engine {
        let n = num_vars as usize;
        let mut pos_occ = vec![Vec::new(); n + 1];
        let mut neg_occ = vec![Vec::new(); n + 1];
        for (ci, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit.is_positive() {
                    pos_occ[lit.var() as usize].push(ci as u32);
                } else {
                    neg_occ[lit.var() as usize].push(ci as u32);
                }
            }
        }
        let unassigned_count = clauses.iter().map(|c| c.len() as u32).collect();
        let true_count = vec![0; clauses.len()];
        Engine {
            clauses,
            pos_occ,
            neg_occ,
            values: vec![None; n + 1],
            true_count,
            unassigned_count,
            trail: Vec::new(),
            queue: Vec::new(),
            propagations: 0,
        }
    }

    fn value(&self, v: VarId) -> Option<bool> {
        self.values[v as usize]
    }

    fn snapshot(&self) -> Assignment {
        Assignment {
            values: self.values.clone(),
        }
    }

    /// Assigns `v := b` and updates clause counters. Returns a falsified
    /// clause index on conflict; otherwise enqueues any new unit clauses.
    fn assign(&mut self, v: VarId, b: bool) -> Result<(), usize> {
        debug_assert!(self.values[v as usize].is_none());
        self.values[v as usize] = Some(b);
        self.trail.push(v);
        let v = v as usize;
        // Occurrence lists are immutable after construction; borrow them out
        // so the counters can be updated alongside.
        let pos = std::mem::take(&mut self.pos_occ[v]);
        let neg = std::mem::take(&mut self.neg_occ[v]);
        let (sat_side, falsified_side) = if b { (&pos, &neg) } else { (&neg, &pos) };
        for &ci in sat_side {
            self.true_count[ci as usize] += 1;
            self.unassigned_count[ci as usize] -= 1;
        }
        let mut conflict = None;
        for &ci in falsified_side {
            let ci = ci as usize;
            self.unassigned_count[ci] -= 1;
            if self.true_count[ci] == 0 {
                match self.unassigned_count[ci] {
                    0 => conflict = conflict.or(Some(ci)),
                    1 => {
                        if let Some(unit) = self.sole_unassigned(ci) {
                            self.queue.push((unit, ci));
                        }
                    }
                    _ => {}
                }
            }
        }
        self.pos_occ[v] = pos;
        self.neg_occ[v] = neg;
        match conflict {
            Some(ci) => Err(ci),
            None => Ok(()),
        }
    }

    fn sole_unassigned(&self, ci: usize) -> Option<Lit> {
        self.clauses[ci]
            .iter()
            .copied()
            .find(|l| self.value(l.var()).is_none())
    }

    fn unassign_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap() as usize;
            let b = self.values[v].take().unwrap();
            let pos = std::mem::take(&mut self.pos_occ[v]);
            let neg = std::mem::take(&mut self.neg_occ[v]);
            let (sat_side, falsified_side) = if b { (&pos, &neg) } else { (&neg, &pos) };
            for &ci in sat_side {
                self.true_count[ci as usize] -= 1;
                self.unassigned_count[ci as usize] += 1;
            }
            for &ci in falsified_side {
                self.unassigned_count[ci as usize] += 1;
            }
            self.pos_occ[v] = pos;
            self.neg_occ[v] = neg;
        }
        self.queue.clear();
    }

    /// Scans for clauses that are already unit or empty under the current
    /// assignment and seeds the propagation queue.
    fn seed_initial_units(&mut self) -> Result<(), usize> {
        for ci in 0..self.clauses.len() {
            if self.true_count[ci] > 0 {
                continue;
            }
            match self.unassigned_count[ci] {
                0 => return Err(ci),
                1 => {
                    if let Some(unit) = self.sole_unassigned(ci) {
                        self.queue.push((unit, ci));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn propagate(&mut self) -> Result<(), usize> {
        while let Some((lit, reason)) = self.queue.pop() {
            match self.value(lit.var()) {
                Some(b) if b == lit.is_positive() => continue,
                Some(_) => return Err(reason),
                None => {
                    self.propagations += 1;
                    self.assign(lit.var(), lit.is_positive())?;
                }
            }
        }
        Ok(())
    }

    fn seed_and_propagate(&mut self, partial: &Assignment) -> Result<(), usize> {
        for v in 1..partial.values.len() {
            if let Some(b) = partial.values[v] {
                self.assign(v as VarId, b)?;
            }
        }
        self.seed_initial_units()?;
        self.propagate()
    }
}

fn search(num_vars: u32, clauses: Vec<Vec<Lit>>, config: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut engine = Engine::new(num_vars, clauses);

    let order: Vec<VarId> = match &config.branch_order {
        Some(order) => order.clone(),
        None => (1..=num_vars).collect(),
    };
    debug_assert_eq!(order.len(), num_vars as usize);

    // (variable, trail mark before the decision, second polarity pending)
    let mut decisions: Vec<(VarId, usize, bool)> = Vec::new();

    let finish = |status: SolveStatus, mut stats: SolveStats, engine: &Engine| {
        stats.propagations = engine.propagations;
        stats.wall = start.elapsed();
        SolveResult { status, stats }
    };

    let mut pending_conflict = engine.seed_initial_units().err();

    loop {
        if pending_conflict.is_none() {
            pending_conflict = engine.propagate().err();
        }
        if let Some(budget) = config.budget {
            if stats.decisions + engine.propagations > budget {
                return finish(SolveStatus::BudgetExhausted, stats, &engine);
            }
        }
        match pending_conflict.take() {
            Some(_conflict_clause) => {
                stats.conflicts += 1;
                // Chronological backtracking: flip the most recent decision
                // that still has its second polarity to try.
                loop {
                    match decisions.pop() {
                        None => return finish(SolveStatus::Unsat, stats, &engine),
                        Some((var, mark, true)) => {
                            engine.unassign_to(mark);
                            decisions.push((var, mark, false));
                            if let Err(ci) = engine.assign(var, true) {
                                pending_conflict = Some(ci);
                            }
                            break;
                        }
                        Some((_, mark, false)) => {
                            engine.unassign_to(mark);
                        }
                    }
                }
            }
            None => {
                let next = order.iter().copied().find(|&v| engine.value(v).is_none());
                match next {
                    None => {
                        let assignment = engine.snapshot();
                        debug_assert!(assignment.is_total());
                        return finish(SolveStatus::Sat(assignment), stats, &engine);
                    }
                    Some(var) => {
                        stats.decisions += 1;
                        let mark = engine.trail.len();
                        decisions.push((var, mark, true));
                        if let Err(ci) = engine.assign(var, false) {
                            pending_conflict = Some(ci);
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Clause-structure analysis
// ---------------------------------------------------------------------------

/// One cell of the clause sign histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignBucket {
    pub positives: u32,
    pub negatives: u32,
    pub count: usize,
}

/// Purely syntactic statistics over the clause list; no solving involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub sign_histogram: Vec<SignBucket>,
    pub max_clause_width: usize,
    pub is_horn: bool,
    /// Families contributing at least one clause without a negative literal.
    pub all_have_negative_except: Vec<Family>,
}

pub fn analyze_structure(cnf: &Cnf) -> StructureReport {
    let mut histogram: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut max_width = 0usize;
    let mut is_horn = true;
    let mut no_negative: Vec<Family> = Vec::new();
    for clause in cnf.clauses() {
        let positives = clause.literals().iter().filter(|l| l.is_positive()).count() as u32;
        let negatives = clause.width() as u32 - positives;
        *histogram.entry((positives, negatives)).or_insert(0) += 1;
        max_width = max_width.max(clause.width());
        if positives > 1 {
            is_horn = false;
        }
        if negatives == 0 && !no_negative.contains(&clause.family()) {
            no_negative.push(clause.family());
        }
    }
    no_negative.sort();
    StructureReport {
        sign_histogram: histogram
            .into_iter()
            .map(|((positives, negatives), count)| SignBucket {
                positives,
                negatives,
                count,
            })
            .collect(),
        max_clause_width: max_width,
        is_horn,
        all_have_negative_except: no_negative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::EncodeFlags;
    use crate::encode::encode;
    use crate::graph::{validate_instance, Graph, Instance};

    fn path_instance(n: u32, k: u32) -> Instance {
        let g = Graph::new(n, (1..n).map(|i| (i, i + 1)).collect()).unwrap();
        validate_instance(g, k).unwrap()
    }

    fn triangle_instance(k: u32) -> Instance {
        let g = Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        validate_instance(g, k).unwrap()
    }

    #[test]
    fn propagation_alone_refutes_p3_k2() {
        let cnf = encode(&path_instance(3, 2), EncodeFlags::default());
        let outcome = unit_propagate(&cnf, &Assignment::empty(cnf.num_vars()));
        assert!(matches!(outcome, PropagationOutcome::Conflict { .. }));

        let result = solve(&cnf);
        assert_eq!(result.status, SolveStatus::Unsat);
        assert_eq!(result.stats.decisions, 0, "refuted without branching");
    }

    #[test]
    fn propagation_trivial_formulas() {
        use crate::cnf::{Clause, Cnf};
        use crate::encode::build_varmap;
        use std::collections::BTreeMap;

        let inst = path_instance(3, 2);
        let vm = build_varmap(&inst, EncodeFlags::default());

        // No clauses at all: the empty partial is already the fixpoint.
        let empty = Cnf::new(
            vm.clone(),
            Vec::new(),
            EncodeFlags::default(),
            BTreeMap::new(),
        );
        let start = Assignment::empty(empty.num_vars());
        assert_eq!(
            unit_propagate(&empty, &start),
            PropagationOutcome::Fixpoint(start.clone())
        );

        // A single unit clause assigns exactly its variable.
        let unit = Cnf::new(
            vm.clone(),
            vec![Clause::new(Family::Eta5, vec![Lit::positive(1)])],
            EncodeFlags::default(),
            BTreeMap::new(),
        );
        match unit_propagate(&unit, &start) {
            PropagationOutcome::Fixpoint(fix) => {
                assert_eq!(fix.value(1), Some(true));
                assert_eq!(fix.assigned_count(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn propagation_fixpoint_simple_cases() {
        let cnf = encode(&path_instance(4, 2), EncodeFlags::default());
        let empty = Assignment::empty(cnf.num_vars());
        match unit_propagate(&cnf, &empty) {
            PropagationOutcome::Fixpoint(fix) => {
                assert!(fix.extends(&empty));
                // The elided unit forces L(0,2) false straight away.
                let l02 = cnf.varmap().l_var(0, 2).unwrap();
                assert_eq!(fix.value(l02), Some(false));
            }
            PropagationOutcome::Conflict { .. } => panic!("P4/K=2 propagates cleanly"),
        }
    }

    #[test]
    fn propagation_is_monotone() {
        let cnf = encode(&path_instance(5, 2), EncodeFlags::default());
        let mut partial = Assignment::empty(cnf.num_vars());
        partial.set(cnf.varmap().f_var(1), true);
        if let PropagationOutcome::Fixpoint(fix) = unit_propagate(&cnf, &partial) {
            assert!(fix.extends(&partial));
        }
    }

    #[test]
    fn solve_p4_sat_with_valid_model() {
        let cnf = encode(&path_instance(4, 2), EncodeFlags::default());
        let result = solve(&cnf);
        match result.status {
            SolveStatus::Sat(asn) => {
                assert!(asn.is_total());
                assert!(evaluate(&cnf, &asn), "independent evaluation pass");
                // P4 has a unique size-2 matching: edges 1 and 3.
                assert_eq!(asn.value(cnf.varmap().f_var(1)), Some(true));
                assert_eq!(asn.value(cnf.varmap().f_var(2)), Some(false));
                assert_eq!(asn.value(cnf.varmap().f_var(3)), Some(true));
            }
            other => panic!("expected SAT, got {other:?}"),
        }
    }

    #[test]
    fn solve_triangle_unsat() {
        let cnf = encode(&triangle_instance(2), EncodeFlags::default());
        assert_eq!(solve(&cnf).status, SolveStatus::Unsat);
    }

    #[test]
    fn solve_k_above_m_unsat_via_empty_clause() {
        let cnf = encode(&path_instance(4, 4), EncodeFlags::default());
        assert!(cnf.has_empty_clause());
        let result = solve(&cnf);
        assert_eq!(result.status, SolveStatus::Unsat);
        assert_eq!(result.stats.decisions, 0);
    }

    #[test]
    fn budget_exhaustion_is_not_unsat() {
        let cnf = encode(&path_instance(8, 2), EncodeFlags::default());
        let config = SolverConfig {
            budget: Some(1),
            branch_order: None,
        };
        let result = solve_with(&cnf, &config);
        assert_eq!(result.status, SolveStatus::BudgetExhausted);
    }

    #[test]
    fn answers_invariant_under_branch_order() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(3);
        for (inst, expect_sat) in [
            (path_instance(4, 2), true),
            (path_instance(5, 2), true),
            (triangle_instance(2), false),
            (triangle_instance(3), false),
            (path_instance(6, 3), true),
            (path_instance(6, 4), false),
        ] {
            let cnf = encode(&inst, EncodeFlags::default());
            let n = cnf.num_vars();
            let ascending: Vec<VarId> = (1..=n).collect();
            let descending: Vec<VarId> = (1..=n).rev().collect();
            let mut shuffled = ascending.clone();
            shuffled.shuffle(&mut rng);
            for order in [ascending, descending, shuffled] {
                let config = SolverConfig {
                    budget: None,
                    branch_order: Some(order),
                };
                let result = solve_with(&cnf, &config);
                assert_eq!(result.status.is_sat(), expect_sat);
                if let SolveStatus::Sat(asn) = &result.status {
                    assert!(evaluate(&cnf, asn));
                }
            }
        }
    }

    #[test]
    fn dimacs_solving_matches_internal() {
        for (inst, expect_sat) in [
            (path_instance(4, 2), true),
            (triangle_instance(2), false),
            (path_instance(4, 4), false),
        ] {
            let cnf = encode(&inst, EncodeFlags::default());
            let text = crate::dimacs::to_dimacs(&cnf);
            let result = solve_dimacs(&text).unwrap();
            assert_eq!(result.status.is_sat(), expect_sat);
        }
    }

    #[test]
    fn structure_report_default_encoding() {
        let cnf = encode(&path_instance(4, 2), EncodeFlags::default());
        let report = analyze_structure(&cnf);
        assert!(!report.is_horn, "η8 carries two positive literals");
        assert_eq!(report.all_have_negative_except, vec![Family::Eta5]);
        assert!(report.max_clause_width <= 3);
        let total: usize = report.sign_histogram.iter().map(|b| b.count).sum();
        assert_eq!(total, cnf.len());
    }

    #[test]
    fn structure_report_embedding_reaches_width_four() {
        let flags = EncodeFlags {
            embed_bfc: true,
            ..EncodeFlags::default()
        };
        let cnf = encode(&path_instance(4, 2), flags);
        let report = analyze_structure(&cnf);
        assert_eq!(report.max_clause_width, 4);
    }
}
