/// Word-count space accounting and per-query work counters.
///
/// `words` is the number of 64-bit words a built structure retains for its
/// payload (matrix cells, list entries, table slots); allocator overhead is
/// not counted. `probes` counts element comparisons and table lookups made
/// by the current query and `queries_issued` counts inner-structure queries
/// made by a reduction. Both reset at the start of every query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CostMeter {
    pub words: u64,
    pub probes: u64,
    pub queries_issued: u64,
}

impl CostMeter {
    pub fn with_words(words: u64) -> Self {
        Self {
            words,
            ..Self::default()
        }
    }

    pub fn begin_query(&mut self) {
        self.probes = 0;
        self.queries_issued = 0;
    }

    #[inline]
    pub fn probe(&mut self, count: u64) {
        self.probes += count;
    }

    /// Folds the query counters of an inner query into this one.
    pub fn absorb_inner(&mut self, inner: &CostMeter) {
        self.probes += inner.probes;
        self.queries_issued += 1 + inner.queries_issued;
    }

    /// Associative merge of two independent scopes.
    pub fn merge(self, other: CostMeter) -> CostMeter {
        CostMeter {
            words: self.words.max(other.words),
            probes: self.probes + other.probes,
            queries_issued: self.queries_issued + other.queries_issued,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reset_and_absorb() {
        let mut outer = CostMeter::with_words(10);
        outer.probe(3);
        let mut inner = CostMeter::default();
        inner.probe(5);
        outer.absorb_inner(&inner);
        assert_eq!(outer.probes, 8);
        assert_eq!(outer.queries_issued, 1);
        outer.begin_query();
        assert_eq!((outer.words, outer.probes, outer.queries_issued), (10, 0, 0));
    }

    #[test]
    fn merge_is_associative() {
        let a = CostMeter {
            words: 1,
            probes: 2,
            queries_issued: 3,
        };
        let b = CostMeter {
            words: 4,
            probes: 5,
            queries_issued: 6,
        };
        let c = CostMeter {
            words: 2,
            probes: 7,
            queries_issued: 1,
        };
        assert_eq!(a.merge(b).merge(c), a.merge(b.merge(c)));
    }
}
