//! Ground truth by exhaustive search. Deliberately shares no machinery with
//! the encoder or solver: a recursive include/exclude branch over the edge
//! list with a simple remaining-edges bound.

use thiserror::Error;

use crate::graph::Graph;

/// Default cap on instance size for the exhaustive search.
pub const DEFAULT_EDGE_LIMIT: u32 = 22;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive oracle: {m} edges exceeds limit {limit}")]
    TooLarge { m: u32, limit: u32 },
}

/// Maximum matching cardinality plus one witness of that size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub max_size: usize,
    pub witness: Vec<u32>,
}

pub fn max_matching(g: &Graph) -> Result<OracleResult, OracleError> {
    max_matching_with_limit(g, DEFAULT_EDGE_LIMIT)
}

pub fn max_matching_with_limit(g: &Graph, limit: u32) -> Result<OracleResult, OracleError> {
    let m = g.m();
    if m > limit {
        return Err(OracleError::TooLarge { m, limit });
    }
    let mut used = vec![false; g.n() as usize + 1];
    let mut current = Vec::new();
    let mut best = Vec::new();
    branch(g, 1, &mut used, &mut current, &mut best);
    Ok(OracleResult {
        max_size: best.len(),
        witness: best,
    })
}

fn branch(g: &Graph, next: u32, used: &mut [bool], current: &mut Vec<u32>, best: &mut Vec<u32>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if next > g.m() {
        return;
    }
    // Even taking every remaining edge cannot beat the best found so far.
    if current.len() + (g.m() - next + 1) as usize <= best.len() {
        return;
    }
    let (u, v) = g.edge(next);
    if !used[u as usize] && !used[v as usize] {
        used[u as usize] = true;
        used[v as usize] = true;
        current.push(next);
        branch(g, next + 1, used, current, best);
        current.pop();
        used[u as usize] = false;
        used[v as usize] = false;
    }
    branch(g, next + 1, used, current, best);
}

/// Is there a matching of size at least `k`?
pub fn decide(g: &Graph, k: u32) -> Result<bool, OracleError> {
    Ok(max_matching(g)?.max_size >= k as usize)
}
