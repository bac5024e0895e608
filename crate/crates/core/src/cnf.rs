//! Clause and formula types. Every clause carries the tag of the constraint
//! family that produced it, so structural audits and per-family statistics
//! stay possible after the families are merged into one list.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vars::{Lit, VarMap};

/// Encoder switches.
///
/// `embed_bfc` additionally expresses the no-two-adjacent-matched-edges rule
/// through the index mapping (families η25/η26/η27). `tighten_ranges`
/// shrinks the defined index intervals using count feasibility.
/// `include_redundant` keeps the per-edge uniqueness clauses (η2/η3) even
/// though the successor-restriction family η9 makes them derivable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodeFlags {
    pub embed_bfc: bool,
    pub tighten_ranges: bool,
    pub include_redundant: bool,
}

impl Default for EncodeFlags {
    fn default() -> Self {
        EncodeFlags {
            embed_bfc: false,
            tighten_ranges: false,
            include_redundant: true,
        }
    }
}

impl EncodeFlags {
    /// All eight switch combinations, defaults first; handy for sweeps.
    pub fn all_variants() -> Vec<EncodeFlags> {
        let mut out = Vec::new();
        for include_redundant in [true, false] {
            for embed_bfc in [false, true] {
                for tighten_ranges in [false, true] {
                    out.push(EncodeFlags {
                        embed_bfc,
                        tighten_ranges,
                        include_redundant,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for EncodeFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "embed_bfc={} tighten_ranges={} include_redundant={}",
            self.embed_bfc, self.tighten_ranges, self.include_redundant
        )
    }
}

/// Constraint family tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// One clause per pair of edges sharing a vertex.
    Bfc,
    /// At most one index per edge.
    Eta2,
    /// At most one index for the first edge (its own tag in the source system).
    Eta3,
    /// First edge takes index 0 or 1.
    Eta5,
    /// Forward recursion: successor takes index i or i+1.
    Eta8,
    /// Successor takes *only* index i or i+1.
    Eta9,
    /// Index K-1 at edge m-1 forces index K at edge m.
    Eta10b,
    /// Index 1 at edge 1 means edge 1 is matched.
    Eta12,
    /// Index 0 at edge 1 means edge 1 is unmatched.
    Eta13,
    /// Index 0 means unmatched.
    Eta14,
    /// Index 0 propagates downward.
    Eta15,
    /// Index increase means matched.
    Eta16,
    /// Index repeat means unmatched.
    Eta18,
    /// Matched successor increments the index.
    Eta8b,
    /// Unmatched successor keeps the index.
    Eta8c,
    /// Index K-1 at edge m-1 forces edge m matched with index K.
    Eta10d,
    /// Backward recursion, matched case.
    Eta22,
    /// Backward recursion, unmatched case.
    Eta23,
    /// A flat level forces all lower levels flat.
    Eta24,
    /// Adjacency embedded in the mapping, index form.
    Eta25,
    /// Adjacency embedded in the mapping, matched form.
    Eta26,
    /// Flat level forbidden at the top edge of an adjacent pair.
    Eta27,
}

impl Family {
    pub const ALL: [Family; 22] = [
        Family::Bfc,
        Family::Eta2,
        Family::Eta3,
        Family::Eta5,
        Family::Eta8,
        Family::Eta9,
        Family::Eta10b,
        Family::Eta12,
        Family::Eta13,
        Family::Eta14,
        Family::Eta15,
        Family::Eta16,
        Family::Eta18,
        Family::Eta8b,
        Family::Eta8c,
        Family::Eta10d,
        Family::Eta22,
        Family::Eta23,
        Family::Eta24,
        Family::Eta25,
        Family::Eta26,
        Family::Eta27,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::Bfc => "BFC",
            Family::Eta2 => "η2",
            Family::Eta3 => "η3",
            Family::Eta5 => "η5",
            Family::Eta8 => "η8",
            Family::Eta9 => "η9",
            Family::Eta10b => "η10b",
            Family::Eta12 => "η12",
            Family::Eta13 => "η13",
            Family::Eta14 => "η14",
            Family::Eta15 => "η15",
            Family::Eta16 => "η16",
            Family::Eta18 => "η18",
            Family::Eta8b => "η8b",
            Family::Eta8c => "η8c",
            Family::Eta10d => "η10d",
            Family::Eta22 => "η22",
            Family::Eta23 => "η23",
            Family::Eta24 => "η24",
            Family::Eta25 => "η25",
            Family::Eta26 => "η26",
            Family::Eta27 => "η27",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A disjunction of literals tagged with its originating family. The literal
/// list is empty only for the degenerate collapse of an empty index domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    literals: Vec<Lit>,
    family: Family,
}

impl Clause {
    pub fn new(family: Family, literals: Vec<Lit>) -> Clause {
        // No variable may appear twice, which rules out both duplicate and
        // complementary literals. Clauses never exceed four literals, so a
        // quadratic scan is the cheapest check.
        debug_assert!(
            literals
                .iter()
                .enumerate()
                .all(|(i, a)| literals[i + 1..].iter().all(|b| a.var() != b.var())),
            "repeated variable in {literals:?}"
        );
        Clause { literals, family }
    }

    pub fn literals(&self) -> &[Lit] {
        &self.literals
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn width(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Canonical key for deduplication: the sorted literal set.
    pub fn key(&self) -> Vec<Lit> {
        let mut k = self.literals.clone();
        k.sort();
        k
    }

    /// Allocation-free dedup key. Every schema instantiates at most four
    /// literal slots, so the sorted set fits a fixed array (zero-padded).
    pub(crate) fn fixed_key(&self) -> [i32; 4] {
        debug_assert!(self.literals.len() <= 4);
        let mut key = [0i32; 4];
        for (slot, lit) in key.iter_mut().zip(&self.literals) {
            *slot = lit.to_dimacs();
        }
        key.sort_unstable();
        key
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.literals {
            write!(f, "{lit} ")?;
        }
        write!(f, "0")
    }
}

/// The encoded formula: variable map, deduplicated clause list, and the
/// pre-deduplication per-family tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    varmap: VarMap,
    clauses: Vec<Clause>,
    flags: EncodeFlags,
    family_counts: BTreeMap<Family, usize>,
}

impl Cnf {
    pub(crate) fn new(
        varmap: VarMap,
        clauses: Vec<Clause>,
        flags: EncodeFlags,
        family_counts: BTreeMap<Family, usize>,
    ) -> Cnf {
        Cnf {
            varmap,
            clauses,
            flags,
            family_counts,
        }
    }

    pub fn varmap(&self) -> &VarMap {
        &self.varmap
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn flags(&self) -> EncodeFlags {
        self.flags
    }

    pub fn num_vars(&self) -> u32 {
        self.varmap.total_vars()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Clauses emitted per family before deduplication across families.
    pub fn family_counts(&self) -> &BTreeMap<Family, usize> {
        &self.family_counts
    }

    pub fn family_count(&self, family: Family) -> usize {
        self.family_counts.get(&family).copied().unwrap_or(0)
    }
}
