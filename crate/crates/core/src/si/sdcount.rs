use crate::cost::CostMeter;
use crate::error::Result;
use crate::index::{tri_index, tri_len, DisjointIndex, SetStore};
use crate::instance::SetSystem;

/// Intersection-size structure: a count matrix over sets larger than `T`,
/// membership scans for everything else.
#[derive(Debug, Clone)]
pub struct SdCount {
    threshold: usize,
    store: SetStore,
    slot: Vec<Option<usize>>,
    big: usize,
    counts: Vec<u32>,
}

impl SdCount {
    pub fn build(sys: &SetSystem, threshold: usize) -> Self {
        let store = SetStore::new(sys);
        let mut slot = vec![None; sys.m()];
        let mut big = Vec::new();
        for (i, s) in slot.iter_mut().enumerate() {
            if store.len_of(i) > threshold {
                *s = Some(big.len());
                big.push(i);
            }
        }
        // Pair counts via the element -> big-set inversion.
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); sys.universe() as usize + 1];
        for (s, &i) in big.iter().enumerate() {
            for &e in store.set(i) {
                holders[e as usize].push(s);
            }
        }
        let mut counts = vec![0u32; tri_len(big.len())];
        for sets in &holders {
            for (x, &a) in sets.iter().enumerate() {
                for &b in &sets[x..] {
                    counts[tri_index(a, b)] += 1;
                }
            }
        }
        Self {
            threshold,
            store,
            slot,
            big: big.len(),
            counts,
        }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn words(&self) -> u64 {
        self.store.words() + self.big as u64 + self.counts.len() as u64
    }

    /// `|S_i ∩ S_j|` for 1-based indices.
    pub fn count(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<usize> {
        meter.begin_query();
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        if i0 == j0 {
            meter.probe(1);
            return Ok(self.store.len_of(i0));
        }
        match (self.slot[i0], self.slot[j0]) {
            (Some(s), Some(t)) => {
                meter.probe(1);
                Ok(self.counts[tri_index(s, t)] as usize)
            }
            _ => Ok(self.store.scan_smaller(i0, j0, meter).len()),
        }
    }
}

impl DisjointIndex for SdCount {
    fn words(&self) -> u64 {
        SdCount::words(self)
    }

    fn is_disjoint(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<bool> {
        Ok(self.count(i, j, meter)? == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::canon1;

    #[test]
    fn canon_counts() {
        let st = SdCount::build(&canon1(), 1);
        let mut meter = CostMeter::default();
        assert_eq!(st.count(1, 2, &mut meter).unwrap(), 1);
        assert_eq!(meter.probes, 1);
        assert_eq!(st.count(1, 3, &mut meter).unwrap(), 0);
        assert_eq!(st.count(2, 2, &mut meter).unwrap(), 2);
        assert!(st.is_disjoint(3, 1, &mut meter).unwrap());
        assert!(st.count(0, 1, &mut meter).is_err());
    }

    #[test]
    fn all_big_matrix() {
        let st = SdCount::build(&canon1(), 0);
        let mut meter = CostMeter::default();
        assert_eq!(st.count(3, 3, &mut meter).unwrap(), 1);
        assert_eq!(st.count(2, 1, &mut meter).unwrap(), 1);
        assert_eq!(st.words(), 10 + 3 + 6);
    }
}
