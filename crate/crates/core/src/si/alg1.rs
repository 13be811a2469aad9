use crate::cost::CostMeter;
use crate::error::Result;
use crate::index::{tri_index, tri_len, SetIndex, SetStore};
use crate::instance::SetSystem;
use crate::oracle::{intersect_sorted, QueryResult};

/// Precomputes every pairwise intersection among sets larger than `r`;
/// queries involving a set of size at most `r` scan that set instead.
#[derive(Debug, Clone)]
pub struct Alg1 {
    r: usize,
    store: SetStore,
    /// 0-based set ids with `|S| > r`, ascending.
    big_ids: Vec<usize>,
    /// Position of each set in `big_ids`, or `None` for small sets.
    slot: Vec<Option<usize>>,
    /// Packed upper triangle of intersection lists over big sets. Diagonal
    /// cells stay empty: a self-intersection is the stored set itself.
    matrix: Vec<Vec<u32>>,
}

impl Alg1 {
    pub fn build(sys: &SetSystem, r: usize) -> Self {
        let store = SetStore::new(sys);
        let big_ids: Vec<usize> = (0..sys.m()).filter(|&i| store.len_of(i) > r).collect();
        let mut slot = vec![None; sys.m()];
        for (s, &id) in big_ids.iter().enumerate() {
            slot[id] = Some(s);
        }
        let p = big_ids.len();
        let mut matrix = Vec::with_capacity(tri_len(p));
        for t in 0..p {
            for s in 0..t {
                matrix.push(intersect_sorted(store.set(big_ids[s]), store.set(big_ids[t])));
            }
            matrix.push(Vec::new());
        }
        Self {
            r,
            store,
            big_ids,
            slot,
            matrix,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// 1-based ids of the sets stored in the matrix.
    pub fn big_ids(&self) -> Vec<usize> {
        self.big_ids.iter().map(|&i| i + 1).collect()
    }

    /// The stored list for two big sets (1-based ids), if both are big.
    pub fn matrix_entry(&self, i: usize, j: usize) -> Option<&[u32]> {
        let s = (*self.slot.get(i.checked_sub(1)?)?)?;
        let t = (*self.slot.get(j.checked_sub(1)?)?)?;
        if s == t {
            return Some(self.store.set(i - 1));
        }
        Some(&self.matrix[tri_index(s, t)])
    }
}

impl SetIndex for Alg1 {
    fn name(&self) -> &str {
        "alg1"
    }

    fn m(&self) -> usize {
        self.store.m()
    }

    fn words(&self) -> u64 {
        let p = self.big_ids.len() as u64;
        let lists: u64 = self.matrix.iter().map(|l| l.len() as u64).sum();
        self.store.words() + p + tri_len(p as usize) as u64 + lists
    }

    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        meter.begin_query();
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        match (self.slot[i0], self.slot[j0]) {
            (Some(_), Some(_)) if i0 == j0 => {
                let set = self.store.set(i0);
                meter.probe(1 + set.len() as u64);
                Ok(QueryResult::new(set.to_vec()))
            }
            (Some(s), Some(t)) => {
                let list = &self.matrix[tri_index(s, t)];
                meter.probe(1 + list.len() as u64);
                Ok(QueryResult::new(list.clone()))
            }
            _ => Ok(QueryResult::new(self.store.scan_smaller(i0, j0, meter))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::canon1;
    use crate::oracle::oracle_intersect;

    #[test]
    fn canon_r1() {
        let st = Alg1::build(&canon1(), 1);
        assert_eq!(st.big_ids(), vec![1, 2]);
        assert_eq!(st.matrix_entry(1, 2), Some(&[2][..]));
        let mut meter = CostMeter::default();
        assert!(st.query(1, 3, &mut meter).unwrap().disjoint());
        assert_eq!(meter.probes, 1);
        assert_eq!(st.query(1, 2, &mut meter).unwrap().elements, vec![2]);
        assert_eq!(st.query(2, 2, &mut meter).unwrap().elements, vec![2, 3]);
    }

    #[test]
    fn degenerate_thresholds() {
        let sys = canon1();
        let none = Alg1::build(&sys, 10);
        assert!(none.big_ids().is_empty());
        let all = Alg1::build(&sys, 0);
        assert_eq!(all.big_ids(), vec![1, 2, 3]);
        assert_eq!(all.matrix_entry(1, 3), Some(&[][..]));
        let mut meter = CostMeter::default();
        for st in [&none, &all] {
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(
                        st.query(i, j, &mut meter).unwrap(),
                        oracle_intersect(&sys, i, j).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn bad_index() {
        let st = Alg1::build(&canon1(), 1);
        assert!(st.query(4, 1, &mut CostMeter::default()).is_err());
    }
}
