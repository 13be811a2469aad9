use std::collections::BTreeMap;

use crate::quadtree::hash::LinearHash;

/// Length-`n` 0/1 vector marking the `h2` images of one bucket, with the
/// original elements behind every one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CharVector {
    pub len: usize,
    pub recovery: BTreeMap<usize, Vec<i64>>,
}

impl CharVector {
    pub fn from_positions(len: usize, positions: &[usize]) -> Self {
        let mut recovery = BTreeMap::new();
        for &p in positions {
            assert!(p < len, "position {p} outside vector of length {len}");
            recovery.entry(p).or_insert_with(Vec::new);
        }
        Self { len, recovery }
    }

    /// Sorted positions holding a one.
    pub fn ones(&self) -> Vec<usize> {
        self.recovery.keys().copied().collect()
    }

    pub fn bits(&self) -> Vec<u8> {
        let mut v = vec![0; self.len];
        for &p in self.recovery.keys() {
            v[p] = 1;
        }
        v
    }

    pub fn get(&self, p: usize) -> bool {
        self.recovery.contains_key(&p)
    }

    pub fn originals(&self, p: usize) -> &[i64] {
        self.recovery.get(&p).map_or(&[], Vec::as_slice)
    }
}

pub fn char_vector(bucket: &[i64], h2: &LinearHash, n: usize) -> CharVector {
    let mut recovery: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &x in bucket {
        recovery.entry(h2.apply(x) as usize % n.max(1)).or_default().push(x);
    }
    for originals in recovery.values_mut() {
        originals.sort_unstable();
    }
    CharVector { len: n, recovery }
}
