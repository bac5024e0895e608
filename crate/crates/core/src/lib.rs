//! SAT encoding of the matching decision problem — given an ordered,
//! connected, simple graph and a threshold `K ≥ 2`, is there a matching of
//! at least `K` edges? — together with a DPLL solver, a certificate decoder
//! and verifier, and an exhaustive-search oracle for differential testing.
//!
//! The encoding uses one variable `F(x)` per edge and a running-count
//! predicate `L(i, x)` meaning "exactly `i` of the first `x` edges are
//! matched", restricted to a defined index domain per edge. Clauses come in
//! tagged families so that structural claims (clause width, literal signs)
//! can be audited per family.

pub mod certify;
pub mod cnf;
pub mod dimacs;
pub mod encode;
pub mod graph;
pub mod oracle;
pub mod solve;
pub mod vars;

pub use certify::{
    certificate_to_text, decode, reconstruct_l, verify, DecodeError, MatchingCertificate, Verdict,
    Violation,
};
pub use cnf::{Clause, Cnf, EncodeFlags, Family};
pub use dimacs::{parse_dimacs, to_dimacs, DimacsError, RawCnf};
pub use encode::{build_varmap, encode};
pub use graph::{
    adjacent_pairs, parse_graph, parse_graph_with, serialize_graph, validate_instance,
    AdjacentEdgePairs, Graph, GraphError, Instance, ParseOptions, MIN_K,
};
pub use oracle::{decide, max_matching, max_matching_with_limit, OracleError, OracleResult};
pub use solve::{
    analyze_structure, evaluate, solve, solve_dimacs, solve_raw, solve_with, unit_propagate,
    Assignment, PropagationOutcome, SignBucket, SolveResult, SolveStats, SolveStatus, SolverConfig,
    StructureReport,
};
