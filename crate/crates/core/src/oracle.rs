//! Ground-truth intersection oracles.

use std::collections::HashSet;

use crate::cost::CostMeter;
use crate::error::Result;
use crate::index::SetIndex;
use crate::instance::SetSystem;

/// The answer to an intersection query: the sorted common elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryResult {
    pub elements: Vec<u32>,
}

impl QueryResult {
    pub fn new(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn disjoint(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn out(&self) -> usize {
        self.elements.len()
    }
}

/// Linear merge of two strictly increasing slices.
pub fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[x]);
                x += 1;
                y += 1;
            }
        }
    }
    out
}

/// `S_i ∩ S_j` by sorted merge (1-based indices).
pub fn oracle_intersect(sys: &SetSystem, i: usize, j: usize) -> Result<QueryResult> {
    let a = sys.set(i)?;
    let b = sys.set(j)?;
    Ok(QueryResult::new(intersect_sorted(a, b)))
}

/// Second, independent oracle: hash-set membership instead of merging.
pub fn hash_oracle_intersect(sys: &SetSystem, i: usize, j: usize) -> Result<QueryResult> {
    let a: HashSet<u32> = sys.set(i)?.iter().copied().collect();
    let mut common: Vec<u32> = sys.set(j)?.iter().copied().filter(|e| a.contains(e)).collect();
    common.sort_unstable();
    Ok(QueryResult::new(common))
}

/// The oracle packaged as a [`SetIndex`]; stores the sets and nothing else.
#[derive(Debug, Clone)]
pub struct OracleIndex {
    sys: SetSystem,
}

impl OracleIndex {
    pub fn new(sys: &SetSystem) -> Self {
        Self { sys: sys.clone() }
    }
}

impl SetIndex for OracleIndex {
    fn name(&self) -> &str {
        "oracle"
    }

    fn m(&self) -> usize {
        self.sys.m()
    }

    fn words(&self) -> u64 {
        self.sys.total() as u64
    }

    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        meter.begin_query();
        let a = self.sys.set(i)?;
        let b = self.sys.set(j)?;
        meter.probe((a.len() + b.len()) as u64);
        Ok(QueryResult::new(intersect_sorted(a, b)))
    }
}
