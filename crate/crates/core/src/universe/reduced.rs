use std::collections::HashMap;

use crate::cost::CostMeter;
use crate::error::{Error, Result};
use crate::index::{SetIndex, SetStore};
use crate::instance::SetSystem;
use crate::oracle::{intersect_sorted, OracleIndex, QueryResult};
use crate::si::Alg1;
use crate::universe::battery::{select_hash_battery, HashBattery};
use crate::universe::classify::{classify, Mode, SizeClass, SizeClassification};

/// Builds the structure that answers queries on one hashed copy of the
/// medium sets (universe `8u`).
pub trait InnerBuilder {
    fn build(&self, sys: &SetSystem) -> Result<Box<dyn SetIndex>>;
}

impl<F> InnerBuilder for F
where
    F: Fn(&SetSystem) -> Result<Box<dyn SetIndex>>,
{
    fn build(&self, sys: &SetSystem) -> Result<Box<dyn SetIndex>> {
        self(sys)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleBuilder;

impl InnerBuilder for OracleBuilder {
    fn build(&self, sys: &SetSystem) -> Result<Box<dyn SetIndex>> {
        Ok(Box::new(OracleIndex::new(sys)))
    }
}

/// Algorithm 1 on the hashed instance; `r` defaults to `ceil(sqrt(N))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Alg1Builder {
    pub r: Option<usize>,
}

impl InnerBuilder for Alg1Builder {
    fn build(&self, sys: &SetSystem) -> Result<Box<dyn SetIndex>> {
        let r = self.r.unwrap_or_else(|| (sys.total() as f64).sqrt().ceil() as usize);
        Ok(Box::new(Alg1::build(sys, r)))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReductionParams {
    pub u: u32,
    pub eps: f64,
    pub mode: Mode,
    /// Only used in SI mode.
    pub alpha: f64,
    pub max_rounds: usize,
    pub seed: u64,
}

impl ReductionParams {
    pub fn new(u: u32, eps: f64, mode: Mode) -> Self {
        Self {
            u,
            eps,
            mode,
            alpha: 0.5,
            max_rounds: 32,
            seed: 0,
        }
    }

    /// Allowed false positives per hashed query: 0 in SD mode,
    /// `floor(u^(2 alpha - 1 - 3 eps / 2))` in SI mode.
    pub fn false_positive_budget(&self) -> usize {
        match self.mode {
            Mode::Sd => 0,
            Mode::Si => {
                let exp = 2.0 * self.alpha - 1.0 - 1.5 * self.eps;
                (f64::from(self.u).powf(exp) + 1e-9).floor() as usize
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Disjointness(bool),
    Intersection(QueryResult),
}

impl Answer {
    pub fn disjoint(&self) -> bool {
        match self {
            Self::Disjointness(d) => *d,
            Self::Intersection(r) => r.disjoint(),
        }
    }
}

enum Matrix {
    /// Bit set when the pair is disjoint.
    Bits(Vec<u64>),
    Lists(Vec<Vec<u32>>),
}

pub struct ReducedStructure {
    params: ReductionParams,
    budget: usize,
    class: SizeClassification,
    store: SetStore,
    matrix: Matrix,
    battery: Option<HashBattery>,
    inner: Vec<Box<dyn SetIndex>>,
    /// SI mode: per function, per medium set, hashed value -> originals.
    inverse: Vec<Vec<HashMap<u32, Vec<u32>>>>,
}

impl std::fmt::Debug for ReducedStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedStructure")
            .field("params", &self.params)
            .field("d", &self.class.d())
            .field("e", &self.class.e())
            .field("k", &self.k())
            .finish()
    }
}

impl ReducedStructure {
    pub fn build(sys: &SetSystem, params: ReductionParams, inner_builder: &dyn InnerBuilder) -> Result<Self> {
        let class = classify(sys, params.u, params.eps, params.mode, params.alpha)?;
        let budget = params.false_positive_budget();
        let store = SetStore::new(sys);
        let (d, cols) = (class.d(), class.d() + class.e());
        let column_ids: Vec<usize> = class.large_ids.iter().chain(&class.medium_ids).copied().collect();
        let matrix = match params.mode {
            Mode::Sd => {
                let mut bits = vec![0u64; (d * cols).div_ceil(64)];
                for (row, &i) in class.large_ids.iter().enumerate() {
                    for (col, &j) in column_ids.iter().enumerate() {
                        if intersect_sorted(store.set(i), store.set(j)).is_empty() {
                            let k = row * cols + col;
                            bits[k / 64] |= 1 << (k % 64);
                        }
                    }
                }
                Matrix::Bits(bits)
            }
            Mode::Si => Matrix::Lists(
                class
                    .large_ids
                    .iter()
                    .flat_map(|&i| column_ids.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| intersect_sorted(store.set(i), store.set(j)))
                    .collect(),
            ),
        };

        let mut st = Self {
            params,
            budget,
            class,
            store,
            matrix,
            battery: None,
            inner: Vec::new(),
            inverse: Vec::new(),
        };
        if st.class.e() == 0 {
            return Ok(st);
        }
        let battery = select_hash_battery(sys, &st.class, params.u, budget, params.max_rounds, params.seed)?;
        for k in 0..battery.k() {
            let hashed = st.hashed_instance_with(&battery, k)?;
            st.inner.push(inner_builder.build(&hashed)?);
            if params.mode == Mode::Si {
                let h = battery.functions[k];
                st.inverse.push(
                    st.class
                        .medium_ids
                        .iter()
                        .map(|&i| {
                            let mut map: HashMap<u32, Vec<u32>> = HashMap::new();
                            for &x in st.store.set(i) {
                                map.entry(h.apply(x)).or_default().push(x);
                            }
                            map
                        })
                        .collect(),
                );
            }
        }
        st.battery = Some(battery);
        Ok(st)
    }

    fn hashed_instance_with(&self, battery: &HashBattery, k: usize) -> Result<SetSystem> {
        let h = battery.functions[k];
        let sets = self
            .class
            .medium_ids
            .iter()
            .map(|&i| h.image(self.store.set(i)))
            .collect();
        SetSystem::new(self.inner_universe(), sets)
    }

    /// The medium sets imaged under the `k`-th function (0-based `k`).
    pub fn hashed_instance(&self, k: usize) -> Option<SetSystem> {
        let battery = self.battery.as_ref()?;
        (k < battery.k()).then(|| self.hashed_instance_with(battery, k).ok())?
    }

    pub fn classification(&self) -> &SizeClassification {
        &self.class
    }

    pub fn battery(&self) -> Option<&HashBattery> {
        self.battery.as_ref()
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    pub fn false_positive_budget(&self) -> usize {
        self.budget
    }

    pub fn k(&self) -> usize {
        self.battery.as_ref().map_or(0, HashBattery::k)
    }

    pub fn rounds(&self) -> usize {
        self.battery.as_ref().map_or(0, |b| b.rounds_used)
    }

    pub fn inner_universe(&self) -> u32 {
        8 * self.params.u
    }

    pub fn inner_count(&self) -> usize {
        self.inner.len()
    }

    /// Stored answer for a large set (row) against a large or medium set.
    pub fn matrix_cell(&self, large0: usize, other0: usize) -> Option<Answer> {
        if self.class.class_of(large0) != SizeClass::Large {
            return None;
        }
        let row = self.class.rank_of(large0);
        let col = self.class.column_of(other0)?;
        let k = row * (self.class.d() + self.class.e()) + col;
        Some(match &self.matrix {
            Matrix::Bits(bits) => Answer::Disjointness(bits[k / 64] >> (k % 64) & 1 == 1),
            Matrix::Lists(lists) => Answer::Intersection(QueryResult::new(lists[k].clone())),
        })
    }

    /// Every medium set has at most `sqrt(u)` elements (SD mode).
    pub fn medium_sizes_bounded(&self) -> bool {
        let bound = f64::from(self.params.u).sqrt();
        self.class
            .medium_ids
            .iter()
            .all(|&i| self.store.len_of(i) as f64 <= bound)
    }

    /// `d e k rounds inner_universe`
    pub fn summary(&self) -> String {
        format!(
            "{} {} {} {} {}",
            self.class.d(),
            self.class.e(),
            self.k(),
            self.rounds(),
            self.inner_universe()
        )
    }

    pub fn words(&self) -> u64 {
        let matrix = match &self.matrix {
            Matrix::Bits(bits) => bits.len() as u64,
            Matrix::Lists(lists) => lists.len() as u64 + lists.iter().map(|l| l.len() as u64).sum::<u64>(),
        };
        let inverse: u64 = self
            .inverse
            .iter()
            .flatten()
            .map(|m| m.len() as u64 + m.values().map(|v| v.len() as u64).sum::<u64>())
            .sum();
        self.store.words()
            + self.store.m() as u64
            + matrix
            + 3 * self.k() as u64
            + self.inner.iter().map(|d| d.words()).sum::<u64>()
            + inverse
    }

    pub fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<Answer> {
        meter.begin_query();
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        let (ci, cj) = (self.class.class_of(i0), self.class.class_of(j0));
        let wrap = |elements: Vec<u32>| match self.params.mode {
            Mode::Sd => Answer::Disjointness(elements.is_empty()),
            Mode::Si => Answer::Intersection(QueryResult::new(elements)),
        };
        if ci == SizeClass::Small || cj == SizeClass::Small {
            let (small, other) = if ci == SizeClass::Small { (i0, j0) } else { (j0, i0) };
            let found = self.store.scan(self.store.set(small), other, meter);
            return Ok(wrap(found));
        }
        if ci == SizeClass::Large || cj == SizeClass::Large {
            let (row, col) = if ci == SizeClass::Large { (i0, j0) } else { (j0, i0) };
            meter.probe(1);
            let cell = self.matrix_cell(row, col).expect("large row with a matrix column");
            if let Answer::Intersection(r) = &cell {
                meter.probe(r.out() as u64);
            }
            return Ok(cell);
        }
        self.query_medium(i0, j0, meter)
    }

    fn query_medium(&self, i0: usize, j0: usize, meter: &mut CostMeter) -> Result<Answer> {
        let (qi, qj) = (self.class.rank_of(i0) + 1, self.class.rank_of(j0) + 1);
        match self.params.mode {
            Mode::Sd => {
                for inner in &self.inner {
                    let mut sub = CostMeter::default();
                    let hashed = inner.query(qi, qj, &mut sub)?;
                    meter.absorb_inner(&sub);
                    if hashed.disjoint() {
                        return Ok(Answer::Disjointness(true));
                    }
                }
                Ok(Answer::Disjointness(false))
            }
            Mode::Si => {
                let table = self.store.table(j0);
                'functions: for (k, inner) in self.inner.iter().enumerate() {
                    let mut sub = CostMeter::default();
                    let hashed = inner.query(qi, qj, &mut sub)?;
                    meter.absorb_inner(&sub);
                    let originals = &self.inverse[k][qi - 1];
                    let mut false_hits = 0;
                    let mut found = Vec::new();
                    for v in hashed.elements {
                        let before = found.len();
                        for &x in originals.get(&v).map_or(&[][..], Vec::as_slice) {
                            meter.probe(1);
                            if table.contains(x) {
                                found.push(x);
                            }
                        }
                        if found.len() == before {
                            false_hits += 1;
                            if false_hits > self.budget {
                                continue 'functions;
                            }
                        }
                    }
                    found.sort_unstable();
                    return Ok(Answer::Intersection(QueryResult::new(found)));
                }
                Err(Error::BatteryViolation { i: i0 + 1, j: j0 + 1 })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::canon1;
    use crate::oracle::oracle_intersect;

    #[test]
    fn canon_sd_with_oracle_inner() {
        let sys = canon1();
        let st = ReducedStructure::build(&sys, ReductionParams::new(4, 0.25, Mode::Sd), &OracleBuilder).unwrap();
        assert_eq!(st.classification().d(), 0);
        assert_eq!(st.inner_count(), st.k());
        for k in 0..st.k() {
            assert_eq!(st.hashed_instance(k).unwrap().m(), 2);
        }
        let mut meter = CostMeter::default();
        assert_eq!(st.query(1, 3, &mut meter).unwrap(), Answer::Disjointness(true));
        assert_eq!(meter.queries_issued, 0);
        assert_eq!(st.query(1, 2, &mut meter).unwrap(), Answer::Disjointness(false));
        assert_eq!(meter.queries_issued as usize, st.k());
        assert_eq!(st.query(2, 2, &mut meter).unwrap(), Answer::Disjointness(false));
        assert_eq!(st.summary(), "0 2 3 1 32");
    }

    #[test]
    fn only_small_sets_builds_nothing() {
        let sys = SetSystem::new(64, vec![vec![1], vec![2], vec![1, 3]]).unwrap();
        let st = ReducedStructure::build(&sys, ReductionParams::new(64, 0.1, Mode::Sd), &OracleBuilder).unwrap();
        assert_eq!(st.classification().e(), 0);
        assert!(st.battery().is_none());
        assert_eq!(st.inner_count(), 0);
    }

    #[test]
    fn only_large_sets_fill_matrix() {
        let sets = vec![(1..=10).collect(), (5..=15).collect(), (20..=30).collect()];
        let sys = SetSystem::new(64, sets).unwrap();
        let mut params = ReductionParams::new(64, 0.1, Mode::Si);
        params.alpha = 0.5;
        let st = ReducedStructure::build(&sys, params, &Alg1Builder::default()).unwrap();
        assert_eq!(st.classification().d(), 3);
        let mut meter = CostMeter::default();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(
                    st.query(i, j, &mut meter).unwrap(),
                    Answer::Intersection(oracle_intersect(&sys, i, j).unwrap())
                );
            }
        }
    }

    #[test]
    fn budgets() {
        assert_eq!(ReductionParams::new(256, 0.1, Mode::Sd).false_positive_budget(), 0);
        let mut p = ReductionParams::new(256, 0.1, Mode::Si);
        p.alpha = 1.0;
        // 256^0.85 = 111.4
        assert_eq!(p.false_positive_budget(), 111);
    }
}
