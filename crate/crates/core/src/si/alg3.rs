use std::collections::HashMap;

use crate::cost::CostMeter;
use crate::error::Result;
use crate::index::{SetIndex, SetStore};
use crate::instance::SetSystem;
use crate::oracle::QueryResult;

/// Heavy-hitter split: the `r` most frequent elements are checked directly at
/// query time and every other common element is precomputed per set pair.
#[derive(Debug, Clone)]
pub struct Alg3 {
    r: usize,
    store: SetStore,
    /// Heavy elements, ascending.
    heavy: Vec<u32>,
    /// Residual intersections keyed by 0-based `(i, j)` with `i < j`.
    residual: HashMap<(usize, usize), Vec<u32>>,
}

/// The `r` most frequent elements, ties broken by smaller value; ascending.
pub fn heavy_hitters(sys: &SetSystem, r: usize) -> Vec<u32> {
    let mut freq = vec![0usize; sys.universe() as usize + 1];
    for set in sys.sets() {
        for &e in set {
            freq[e as usize] += 1;
        }
    }
    let mut ranked: Vec<u32> = (1..=sys.universe()).filter(|&e| freq[e as usize] > 0).collect();
    ranked.sort_by(|&a, &b| freq[b as usize].cmp(&freq[a as usize]).then(a.cmp(&b)));
    ranked.truncate(r);
    ranked.sort_unstable();
    ranked
}

impl Alg3 {
    pub fn build(sys: &SetSystem, r: usize) -> Self {
        let store = SetStore::new(sys);
        let heavy = heavy_hitters(sys, r);
        let mut is_heavy = vec![false; sys.universe() as usize + 1];
        for &e in &heavy {
            is_heavy[e as usize] = true;
        }
        // Invert the light part: element -> sets containing it.
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); sys.universe() as usize + 1];
        for (i, set) in sys.sets().iter().enumerate() {
            for &e in set {
                if !is_heavy[e as usize] {
                    holders[e as usize].push(i);
                }
            }
        }
        let mut residual: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
        for (e, sets) in holders.iter().enumerate() {
            for (x, &a) in sets.iter().enumerate() {
                for &b in &sets[x + 1..] {
                    residual.entry((a, b)).or_default().push(e as u32);
                }
            }
        }
        Self {
            r,
            store,
            heavy,
            residual,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn heavy(&self) -> &[u32] {
        &self.heavy
    }

    /// Stored residual list for 1-based `(i, j)`, `i != j`.
    pub fn residual(&self, i: usize, j: usize) -> Option<&[u32]> {
        let (a, b) = (i.min(j).checked_sub(1)?, i.max(j) - 1);
        self.residual.get(&(a, b)).map(Vec::as_slice)
    }

    pub fn residual_entries(&self) -> usize {
        self.residual.len()
    }
}

impl SetIndex for Alg3 {
    fn name(&self) -> &str {
        "alg3"
    }

    fn m(&self) -> usize {
        self.store.m()
    }

    fn words(&self) -> u64 {
        let dict: u64 = self.residual.values().map(|l| 2 + l.len() as u64).sum();
        self.store.words() + self.heavy.len() as u64 + dict
    }

    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        meter.begin_query();
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        if i0 == j0 {
            let set = self.store.set(i0);
            meter.probe(set.len() as u64);
            return Ok(QueryResult::new(set.to_vec()));
        }
        let (ti, tj) = (self.store.table(i0), self.store.table(j0));
        meter.probe(2 * self.heavy.len() as u64 + 1);
        let mut out: Vec<u32> = self
            .heavy
            .iter()
            .copied()
            .filter(|&e| ti.contains(e) && tj.contains(e))
            .collect();
        if let Some(rest) = self.residual.get(&(i0.min(j0), i0.max(j0))) {
            meter.probe(rest.len() as u64);
            out.extend_from_slice(rest);
            out.sort_unstable();
        }
        Ok(QueryResult::new(out))
    }
}
