//! Query interfaces shared by every structure, plus the per-set storage
//! (element lists and membership tables) they all keep.

use std::collections::HashSet;

use crate::cost::CostMeter;
use crate::error::Result;
use crate::instance::SetSystem;
use crate::oracle::QueryResult;

/// A built SetIntersection structure answering `S_i ∩ S_j` for 1-based `i, j`.
pub trait SetIndex: Send + Sync {
    fn name(&self) -> &str;
    fn m(&self) -> usize;
    fn words(&self) -> u64;
    /// Resets `meter`'s query counters, then answers the query.
    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult>;
}

/// A SetDisjointness structure.
pub trait DisjointIndex: Send + Sync {
    fn words(&self) -> u64;
    fn is_disjoint(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<bool>;
}

impl<T: SetIndex + ?Sized> DisjointIndex for T {
    fn words(&self) -> u64 {
        SetIndex::words(self)
    }

    fn is_disjoint(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<bool> {
        Ok(self.query(i, j, meter)?.disjoint())
    }
}

/// O(1) membership for one set. Backed by the std hash set; space is
/// accounted as one word per element.
#[derive(Debug, Clone, Default)]
pub struct MembershipTable(HashSet<u32>);

impl MembershipTable {
    pub fn new(elements: &[u32]) -> Self {
        Self(elements.iter().copied().collect())
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        self.0.contains(&e)
    }

    pub fn words(&self) -> u64 {
        self.0.len() as u64
    }
}

/// Sorted element lists plus one membership table per set.
#[derive(Debug, Clone)]
pub struct SetStore {
    sets: Vec<Vec<u32>>,
    tables: Vec<MembershipTable>,
    total: usize,
}

impl SetStore {
    pub fn new(sys: &SetSystem) -> Self {
        Self {
            sets: sys.sets().to_vec(),
            tables: sys.sets().iter().map(|s| MembershipTable::new(s)).collect(),
            total: sys.total(),
        }
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// 1-based to 0-based, with range check.
    pub fn index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.sets.len() {
            Err(crate::error::Error::IndexOutOfRange {
                index: i,
                m: self.sets.len(),
            })
        } else {
            Ok(i - 1)
        }
    }

    #[inline]
    pub fn set(&self, i0: usize) -> &[u32] {
        &self.sets[i0]
    }

    #[inline]
    pub fn len_of(&self, i0: usize) -> usize {
        self.sets[i0].len()
    }

    #[inline]
    pub fn table(&self, i0: usize) -> &MembershipTable {
        &self.tables[i0]
    }

    /// Element lists plus tables.
    pub fn words(&self) -> u64 {
        self.total as u64 + self.tables.iter().map(MembershipTable::words).sum::<u64>()
    }

    /// Walks `elements` and keeps those present in set `other0`; one probe each.
    pub fn scan(&self, elements: &[u32], other0: usize, meter: &mut CostMeter) -> Vec<u32> {
        meter.probe(elements.len() as u64);
        let table = &self.tables[other0];
        elements.iter().copied().filter(|&e| table.contains(e)).collect()
    }

    /// Scans the smaller of the two sets against the other's table.
    pub fn scan_smaller(&self, i0: usize, j0: usize, meter: &mut CostMeter) -> Vec<u32> {
        let (small, big) = if self.len_of(i0) <= self.len_of(j0) {
            (i0, j0)
        } else {
            (j0, i0)
        };
        self.scan(&self.sets[small], big, meter)
    }
}

/// Position of an unordered pair `(s, t)` in a packed upper triangle.
#[inline]
pub(crate) fn tri_index(s: usize, t: usize) -> usize {
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    hi * (hi + 1) / 2 + lo
}

#[inline]
pub(crate) fn tri_len(p: usize) -> usize {
    p * (p + 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::canon1;

    #[test]
    fn triangle_indexing_is_dense() {
        let p = 5;
        let mut seen = vec![false; tri_len(p)];
        for t in 0..p {
            for s in 0..=t {
                let k = tri_index(s, t);
                assert_eq!(k, tri_index(t, s));
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn store_scan() {
        let store = SetStore::new(&canon1());
        assert_eq!(store.words(), 10);
        let mut meter = CostMeter::default();
        assert_eq!(store.scan_smaller(0, 2, &mut meter), Vec::<u32>::new());
        assert_eq!(meter.probes, 1);
    }
}
