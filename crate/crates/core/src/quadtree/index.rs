use std::collections::HashSet;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::gen::rng;
use crate::quadtree::bucket::{bucketize, BucketedArrays};
use crate::quadtree::charvec::{char_vector, CharVector};
use crate::quadtree::hash::{HashFamily, LinearHash};
use crate::quadtree::tree::{ExplicitConvs, Forest, InnerBuilders, TreeParams, TsCounters};

/// Largest magnitude accepted for array values, so sums never overflow.
pub const MAX_ABS_VALUE: i64 = 1 << 62;

/// Preprocessing parameters for a 3SUM-Indexing structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsConfig {
    /// Trade-off parameter; must be a power of 4 no larger than `n`.
    pub x: usize,
    pub eps: f64,
    pub family: HashFamily,
    /// Leaves answered by intersection queries rather than a 2SUM scan.
    pub si: bool,
    pub seed: u64,
}

impl TsConfig {
    pub fn new(x: usize, eps: f64) -> Self {
        Self {
            x,
            eps,
            family: HashFamily::default(),
            si: false,
            seed: 0,
        }
    }
}

/// Shift-set level statistics next to their size bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub depth: usize,
    /// Sub-vector length at this depth.
    pub z: usize,
    pub sets: usize,
    pub elements: usize,
    pub max_set_len: usize,
    /// Structural bound on a set: `2^depth · cap` ones per sub-vector.
    pub set_len_bound: usize,
    /// `n · sqrt(z)`.
    pub elements_bound: f64,
    /// `n · sqrt(X / z)`: the per-level element count in the analysis.
    pub analysis_elements: f64,
    /// `n R / sqrt(z)`: the per-level set count in the analysis.
    pub analysis_sets: f64,
}

/// Answer and work counters of one query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryOutcome {
    /// Sorted witness pairs `(a, b)` with `a + b = z`.
    pub pairs: Vec<(i64, i64)>,
    pub counters: TsCounters,
}

/// 3SUM-Indexing over arrays `A`, `B`: is there `a + b = z`?
pub struct ThreeSumIndex {
    config: TsConfig,
    n: usize,
    h1: LinearHash,
    h2: LinearHash,
    arrays: BucketedArrays,
    forest: Forest,
    explicit: Vec<OnceLock<ExplicitConvs>>,
}

fn check_values(name: &str, values: &[i64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| v.unsigned_abs() > MAX_ABS_VALUE as u64) {
        return Err(invalid(format!("{name} value {v} exceeds 2^62 in magnitude")));
    }
    let mut seen = HashSet::with_capacity(values.len());
    if let Some(v) = values.iter().find(|v| !seen.insert(**v)) {
        return Err(invalid(format!("{name} contains {v} twice")));
    }
    Ok(())
}

/// Builds with the default inner structures.
pub fn ts_build(a: &[i64], b: &[i64], config: TsConfig) -> Result<ThreeSumIndex> {
    ThreeSumIndex::build(a, b, config, &InnerBuilders::default())
}

pub fn ts_query(index: &ThreeSumIndex, z: i64) -> Result<bool> {
    Ok(!index.query(z, true)?.pairs.is_empty())
}

pub fn ts_query_reporting(index: &ThreeSumIndex, z: i64) -> Result<Vec<(i64, i64)>> {
    Ok(index.query(z, false)?.pairs)
}

impl ThreeSumIndex {
    pub fn build(a: &[i64], b: &[i64], config: TsConfig, inner: &InnerBuilders) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(invalid("both arrays must be non-empty"));
        }
        check_values("A", a)?;
        check_values("B", b)?;
        let n = a.len().max(b.len());
        if config.x > n {
            return Err(invalid(format!("X = {} exceeds n = {n}", config.x)));
        }
        let params = TreeParams::new(n, config.x, config.eps, config.si)?;
        let mut rng = rng(config.seed);
        let h1 = LinearHash::sample(config.family, params.r as u64, &mut rng)?;
        let h2 = LinearHash::sample(config.family, params.n_pad as u64, &mut rng)?;
        let arrays = bucketize(a, b, params.r, &h1);
        let vectors = |buckets: &[Vec<i64>]| -> Vec<CharVector> {
            buckets.iter().map(|bk| char_vector(bk, &h2, params.n_pad)).collect()
        };
        let forest = Forest::build(vectors(&arrays.a_buckets), vectors(&arrays.b_buckets), params, inner)?;
        let explicit = (0..params.r * params.r).map(|_| OnceLock::new()).collect();
        Ok(Self {
            config,
            n,
            h1,
            h2,
            arrays,
            forest,
            explicit,
        })
    }

    pub fn config(&self) -> &TsConfig {
        &self.config
    }

    pub fn params(&self) -> &TreeParams {
        self.forest.params()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arrays(&self) -> &BucketedArrays {
        &self.arrays
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn hashes(&self) -> (&LinearHash, &LinearHash) {
        (&self.h1, &self.h2)
    }

    fn explicit_for(&self, ia: usize, jb: usize) -> &ExplicitConvs {
        self.explicit[ia * self.params().r + jb].get_or_init(|| self.forest.explicit_for(ia, jb))
    }

    /// Computes every bucket pair's stored convolutions up front.
    pub fn materialize_all(&self) {
        let r = self.params().r;
        (0..r * r).into_par_iter().for_each(|k| {
            self.explicit_for(k / r, k % r);
        });
    }

    /// Words held: arrays and lookups, overflow lists, recovery maps,
    /// tree segments, shift-set structures and materialized convolutions.
    pub fn words(&self) -> u64 {
        let ar = &self.arrays;
        let arrays = 2 * (ar.sorted_a.len() + ar.sorted_b.len()) + ar.overflow_total();
        let recovery: usize = self
            .forest
            .a_vecs
            .iter()
            .chain(&self.forest.b_vecs)
            .map(|v| v.recovery.len() + v.recovery.values().map(Vec::len).sum::<usize>())
            .sum();
        let layout = &self.forest.layout;
        let segments: usize = layout
            .a
            .iter()
            .chain(&layout.b)
            .flatten()
            .flatten()
            .map(|s| 1 + s.ones.len())
            .sum();
        let shift: u64 = self.forest.instances().map(|(_, i)| i.words()).sum();
        let convs: u64 = self
            .explicit
            .iter()
            .filter_map(OnceLock::get)
            .map(ExplicitConvs::words)
            .sum();
        (arrays + recovery + segments) as u64 + shift + convs
    }

    pub fn level_reports(&self) -> Vec<LevelReport> {
        let params = *self.params();
        let n = self.n as f64;
        self.forest
            .instances()
            .map(|(depth, inst)| {
                let z = params.len_at(depth);
                let zf = z as f64;
                LevelReport {
                    depth,
                    z,
                    sets: inst.system().m(),
                    elements: inst.system().total(),
                    max_set_len: inst.max_set_len(),
                    set_len_bound: (1usize << depth) * params.cap,
                    elements_bound: n * zf.sqrt(),
                    analysis_elements: n * (params.x as f64 / zf).sqrt(),
                    analysis_sets: n * params.r as f64 / zf.sqrt(),
                }
            })
            .collect()
    }

    /// All pairs, or the first one found when `stop_first` is set.
    pub fn query(&self, z: i64, stop_first: bool) -> Result<QueryOutcome> {
        if z.unsigned_abs() > 2 * MAX_ABS_VALUE as u64 {
            return Err(invalid(format!("target {z} out of range")));
        }
        let mut out = QueryOutcome::default();
        self.query_overflow(z, stop_first, &mut out);
        if !(stop_first && !out.pairs.is_empty()) {
            self.query_buckets(z, stop_first, &mut out)?;
        }
        out.pairs.sort_unstable();
        Ok(out)
    }

    fn query_overflow(&self, z: i64, stop_first: bool, out: &mut QueryOutcome) {
        let ar = &self.arrays;
        for &x in &ar.overflow_a {
            out.counters.probes += 1;
            if ar.lookup_b.contains(&(z - x)) {
                out.pairs.push((x, z - x));
                if stop_first {
                    return;
                }
            }
        }
        for &y in &ar.overflow_b {
            out.counters.probes += 1;
            let x = z - y;
            if ar.lookup_a.contains(&x) && ar.overflow_a.binary_search(&x).is_err() {
                out.pairs.push((x, y));
                if stop_first {
                    return;
                }
            }
        }
    }

    fn query_buckets(&self, z: i64, stop_first: bool, out: &mut QueryOutcome) -> Result<()> {
        let params = *self.params();
        let r = params.r;
        let n_pad = params.n_pad;
        let h1_cands = self.h1.sum_candidates(z);
        let h2_cands = self.h2.sum_candidates(z);
        let mut targets: Vec<usize> = h2_cands
            .iter()
            .flat_map(|&t| [t as usize, t as usize + n_pad])
            .filter(|&t| t <= 2 * n_pad - 2)
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for i in 0..r {
            let mut partners: Vec<usize> = h1_cands.iter().map(|&c| (c as usize + r - i % r) % r).collect();
            partners.sort_unstable();
            partners.dedup();
            for j in partners {
                let explicit = self.explicit_for(i, j);
                for &t in &targets {
                    self.forest
                        .search(explicit, i, j, t, z, stop_first, &mut out.pairs, &mut out.counters)?;
                    if stop_first && !out.pairs.is_empty() {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Decides 3SUM on `(A, B, C)` through the index: preprocess `A`, `B`
/// (deduplicated) and query every `c`. `X` is lowered to the largest power of
/// 4 not above `n` when needed.
pub fn threesum_solve(a: &[i64], b: &[i64], c: &[i64], x: usize, eps: f64) -> Result<bool> {
    let dedup = |v: &[i64]| -> Vec<i64> {
        let mut v = v.to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let (a, b) = (dedup(a), dedup(b));
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    let n = a.len().max(b.len());
    let mut x = x.max(1);
    while x > n {
        x /= 4;
    }
    let index = ts_build(&a, &b, TsConfig::new(x.max(1), eps))?;
    for &z in c {
        if ts_query(&index, z)? {
            return Ok(true);
        }
    }
    Ok(false)
}
