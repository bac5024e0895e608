//! Exhaustive validation: every connected simple labeled graph up to a
//! vertex bound, every threshold, optionally every flag variant and every
//! edge ordering, each solved and compared against the exhaustive oracle.
//! Disagreements are shrunk to minimal witnesses.

use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;

use matchsat::{
    decode, encode, max_matching, serialize_graph, solve, validate_instance, verify, EncodeFlags,
    Graph, SolveStatus,
};

use crate::report::{Answer, CertFailureReport, CorpusReport, DiscrepancyReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KRange {
    /// Every K from 2 through m.
    All,
    List(Vec<u32>),
}

impl KRange {
    fn values(&self, m: u32) -> Vec<u32> {
        match self {
            KRange::All => (2..=m).collect(),
            KRange::List(ks) => ks.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub max_n: u32,
    pub k_range: KRange,
    pub flag_variants: Vec<EncodeFlags>,
    pub workers: usize,
    /// Sweep all edge orderings for graphs up to this many vertices
    /// (0 disables the ordering sweep).
    pub ordering_max_n: u32,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_n: 6,
            k_range: KRange::All,
            flag_variants: vec![EncodeFlags::default()],
            workers: 1,
            ordering_max_n: 4,
        }
    }
}

/// All connected simple labeled graphs on exactly `n` vertices, edges in
/// lexicographic order. Every subset of the possible edges is tried; a graph
/// with an isolated vertex is not connected and drops out.
pub fn connected_graphs(n: u32) -> Vec<Graph> {
    let slots: Vec<(u32, u32)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 1u64..(1 << slots.len()) {
        let edges: Vec<(u32, u32)> = slots
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if let Ok(g) = Graph::new(n, edges) {
            out.push(g);
        }
    }
    out
}

/// Every permutation of the edge list as its own graph instance.
pub fn edge_orderings(g: &Graph) -> Vec<Graph> {
    let m = g.m() as usize;
    g.edges()
        .iter()
        .copied()
        .permutations(m)
        .map(|edges| Graph::new(g.n(), edges).expect("permutation preserves validity"))
        .collect()
}

/// Does the solver's answer differ from the oracle's decision?
pub fn solver_oracle_disagree(g: &Graph, k: u32, flags: EncodeFlags) -> bool {
    let Ok(inst) = validate_instance(g.clone(), k) else {
        return false;
    };
    let sat = solve(&encode(&inst, flags)).status.is_sat();
    match max_matching(g) {
        Ok(r) => (r.max_size >= k as usize) != sat,
        Err(_) => false,
    }
}

fn remove_edge(g: &Graph, x: u32) -> Option<Graph> {
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i as u32 + 1 != x)
        .map(|(_, &e)| e)
        .collect();
    Graph::new(g.n(), edges).ok()
}

fn remove_vertex(g: &Graph, v: u32) -> Option<Graph> {
    let relabel = |w: u32| if w > v { w - 1 } else { w };
    let edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .filter(|&&(a, b)| a != v && b != v)
        .map(|&(a, b)| (relabel(a), relabel(b)))
        .collect();
    Graph::new(g.n() - 1, edges).ok()
}

/// Greedy minimization: repeatedly try dropping one edge, then one vertex,
/// then decrementing K, keeping any reduction under which `keep` still
/// holds. First-found greedy minimum; global minimality is not attempted.
pub fn shrink_instance<F>(graph: &Graph, k: u32, keep: F) -> (Graph, u32)
where
    F: Fn(&Graph, u32) -> bool,
{
    debug_assert!(keep(graph, k));
    let mut current = graph.clone();
    let mut current_k = k;
    'outer: loop {
        for x in 1..=current.m() {
            if let Some(candidate) = remove_edge(&current, x) {
                if keep(&candidate, current_k) {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        for v in 1..=current.n() {
            if let Some(candidate) = remove_vertex(&current, v) {
                if keep(&candidate, current_k) {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        if current_k > 2 && keep(&current, current_k - 1) {
            current_k -= 1;
            continue 'outer;
        }
        return (current, current_k);
    }
}

#[derive(Default)]
struct ItemOutcome {
    instances: u64,
    agree_sat: u64,
    agree_unsat: u64,
    propagation_decided: u64,
    disagreements: Vec<(Graph, u32, EncodeFlags, Answer, bool)>,
    cert_failures: Vec<CertFailureReport>,
}

fn run_graph(g: &Graph, spec: &CorpusSpec) -> ItemOutcome {
    let mut out = ItemOutcome::default();
    let oracle_max = max_matching(g)
        .expect("corpus graphs stay within the exhaustive limit")
        .max_size;
    for &flags in &spec.flag_variants {
        for k in spec.k_range.values(g.m()) {
            let Ok(inst) = validate_instance(g.clone(), k) else {
                continue;
            };
            let cnf = encode(&inst, flags);
            let result = solve(&cnf);
            out.instances += 1;
            if result.stats.decisions == 0 {
                out.propagation_decided += 1;
            }
            let oracle_says_sat = oracle_max >= k as usize;
            match &result.status {
                SolveStatus::Sat(asn) => {
                    match decode(&cnf, asn) {
                        Ok(cert) => {
                            let verdict = verify(&cert, g);
                            if !verdict.is_valid() {
                                out.cert_failures.push(CertFailureReport {
                                    graph: serialize_graph(g),
                                    k,
                                    flags,
                                    detail: verdict.to_string(),
                                });
                            }
                        }
                        Err(err) => out.cert_failures.push(CertFailureReport {
                            graph: serialize_graph(g),
                            k,
                            flags,
                            detail: err.to_string(),
                        }),
                    }
                    if oracle_says_sat {
                        out.agree_sat += 1;
                    } else {
                        out.disagreements
                            .push((g.clone(), k, flags, Answer::Sat, oracle_says_sat));
                    }
                }
                SolveStatus::Unsat => {
                    if oracle_says_sat {
                        out.disagreements.push((
                            g.clone(),
                            k,
                            flags,
                            Answer::Unsat,
                            oracle_says_sat,
                        ));
                    } else {
                        out.agree_unsat += 1;
                    }
                }
                SolveStatus::BudgetExhausted => unreachable!("corpus runs without budget"),
            }
        }
    }
    out
}

/// The corpus work items in deterministic order: for small graphs every
/// edge ordering, for the rest the canonical ordering only.
pub fn corpus_items(spec: &CorpusSpec) -> (Vec<Graph>, u64) {
    let mut items = Vec::new();
    let mut ordering_items = 0u64;
    for n in 2..=spec.max_n {
        for g in connected_graphs(n) {
            if n <= spec.ordering_max_n {
                let orderings = edge_orderings(&g);
                ordering_items += orderings.len() as u64;
                items.extend(orderings);
            } else {
                items.push(g);
            }
        }
    }
    (items, ordering_items)
}

pub fn run_corpus(spec: &CorpusSpec) -> CorpusReport {
    let start = Instant::now();
    let (items, ordering_graphs) = corpus_items(spec);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .expect("thread pool");
    let outcomes: Vec<ItemOutcome> =
        pool.install(|| items.par_iter().map(|g| run_graph(g, spec)).collect());

    let mut report = CorpusReport {
        max_n: spec.max_n,
        instances: 0,
        agree_sat: 0,
        agree_unsat: 0,
        disagree: 0,
        certificate_failures: 0,
        propagation_decided: 0,
        ordering_instances: ordering_graphs,
        discrepancies: Vec::new(),
        certificate_failure_details: Vec::new(),
        wall_ms: None,
    };
    for outcome in outcomes {
        report.instances += outcome.instances;
        report.agree_sat += outcome.agree_sat;
        report.agree_unsat += outcome.agree_unsat;
        report.propagation_decided += outcome.propagation_decided;
        report.certificate_failures += outcome.cert_failures.len() as u64;
        report
            .certificate_failure_details
            .extend(outcome.cert_failures);
        for (g, k, flags, sat_answer, oracle_answer) in outcome.disagreements {
            report.disagree += 1;
            let (shrunk, shrunk_k) =
                shrink_instance(&g, k, |g, k| solver_oracle_disagree(g, k, flags));
            report.discrepancies.push(DiscrepancyReport {
                graph: serialize_graph(&g),
                k,
                flags,
                sat_answer,
                oracle_answer,
                shrunk_graph: serialize_graph(&shrunk),
                shrunk_k,
            });
        }
    }
    report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}
