//! Hybrid quad trees over pairs of characteristic vectors.
//!
//! Leaves hold windows of length `Λ`; a window with more than `cap` ones is
//! split into copies of at most `cap` ones each. Every level above pairs up
//! consecutive entries `(2k, 2k + 1)`. Depths `1..=K` are implicit: their
//! convolution positions are decided through shift-set instances shared by
//! all buckets. Deeper levels (closer to the root) store convolutions.

use crate::cost::CostMeter;
use crate::error::{invalid, Result};
use crate::index::{DisjointIndex, SetIndex};
use crate::instance::SetSystem;
use crate::oracle::OracleIndex;
use crate::quadtree::charvec::CharVector;
use crate::quadtree::conv::convolve_sparse;
use crate::quadtree::shiftset::{
    build_shift_sets, ceil_sqrt, conv_position_nonzero, conv_position_witnesses, ShiftInner, ShiftSetInstance,
};
use crate::quadtree::twosum::twosum_scan;
use crate::si::{Alg1, SdCount};

pub type SdBuilder = dyn Fn(&SetSystem) -> Result<Box<dyn DisjointIndex>> + Send + Sync;
pub type SiBuilder = dyn Fn(&SetSystem) -> Result<Box<dyn SetIndex>> + Send + Sync;

/// Structures built over the shift-set instances.
pub struct InnerBuilders {
    pub sd: Box<SdBuilder>,
    pub si: Box<SiBuilder>,
}

impl Default for InnerBuilders {
    /// Counting structure with `T = ceil(sqrt N)` for disjointness,
    /// Algorithm 1 with `r = ceil(sqrt N)` for intersection.
    fn default() -> Self {
        Self {
            sd: Box::new(|sys: &SetSystem| {
                Ok(Box::new(SdCount::build(sys, ceil_sqrt(sys.total()))) as Box<dyn DisjointIndex>)
            }),
            si: Box::new(|sys: &SetSystem| Ok(Box::new(Alg1::build(sys, ceil_sqrt(sys.total()))) as Box<dyn SetIndex>)),
        }
    }
}

impl InnerBuilders {
    /// Brute-force inner structures, for testing the tree logic in isolation.
    pub fn oracle() -> Self {
        Self {
            sd: Box::new(|sys: &SetSystem| Ok(Box::new(OracleIndex::new(sys)) as Box<dyn DisjointIndex>)),
            si: Box::new(|sys: &SetSystem| Ok(Box::new(OracleIndex::new(sys)) as Box<dyn SetIndex>)),
        }
    }
}

/// Level geometry derived from `n`, `X` and `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    pub x: usize,
    pub eps: f64,
    /// Bucket count `ceil(sqrt X)`.
    pub r: usize,
    /// Characteristic-vector length: `n` rounded up to a power of two.
    pub n_pad: usize,
    /// `log2` of the top implicit length, `min(floor((1+ε) log2 X), log2 n_pad)`.
    pub top_exp: u32,
    /// Number of implicit levels, `min(ceil(2ε log2 X), top_exp)`.
    pub implicit: u32,
    pub leaf_len: usize,
    /// Most ones a leaf entry may carry.
    pub cap: usize,
    /// Leaves answered by one intersection query each.
    pub si: bool,
}

impl TreeParams {
    pub fn new(n: usize, x: usize, eps: f64, si: bool) -> Result<Self> {
        if x == 0 || !x.is_power_of_two() || !x.trailing_zeros().is_multiple_of(2) {
            return Err(invalid(format!("X = {x} must be a power of 4")));
        }
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(invalid(format!("eps = {eps} must be non-negative")));
        }
        let lx = x.trailing_zeros();
        let n_pad = n.max(1).next_power_of_two();
        let ln = n_pad.trailing_zeros();
        let r = ceil_sqrt(x);
        let (top_exp, implicit) = if si {
            (lx.min(ln), 0)
        } else {
            let top = (((1.0 + eps) * f64::from(lx)) + 1e-9).floor() as u32;
            let top = top.min(ln);
            let k = ((2.0 * eps * f64::from(lx)) - 1e-9).ceil().max(0.0) as u32;
            (top, k.min(top))
        };
        let leaf_len = 1usize << (top_exp - implicit);
        Ok(Self {
            x,
            eps,
            r,
            n_pad,
            top_exp,
            implicit,
            leaf_len,
            cap: leaf_len.div_ceil(r).max(1),
            si,
        })
    }

    pub fn len_at(&self, depth: usize) -> usize {
        self.leaf_len << depth
    }

    pub fn is_implicit(&self, depth: usize) -> bool {
        depth >= 1 && depth <= self.implicit as usize
    }

    pub fn is_explicit(&self, depth: usize) -> bool {
        depth > self.implicit as usize || (depth == 0 && self.implicit == 0 && !self.si)
    }
}

/// A (possibly merged) sub-vector: ones at absolute positions, read relative
/// to `offset`. Padding entries carry no ones and no position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub offset: usize,
    pub ones: Vec<usize>,
    pub real: bool,
}

impl Segment {
    pub fn local_ones(&self) -> Vec<usize> {
        self.ones.iter().map(|&p| p - self.offset).collect()
    }

    fn padding(n_pad: usize) -> Self {
        Self {
            offset: n_pad,
            ones: Vec::new(),
            real: false,
        }
    }

    fn merge(a: &Segment, b: &Segment, n_pad: usize) -> Segment {
        let offset = [a, b]
            .iter()
            .filter(|s| s.real)
            .map(|s| s.offset)
            .min()
            .unwrap_or(n_pad);
        let mut ones = Vec::with_capacity(a.ones.len() + b.ones.len());
        ones.extend_from_slice(&a.ones);
        ones.extend_from_slice(&b.ones);
        ones.sort_unstable();
        Segment {
            offset,
            ones,
            real: a.real || b.real,
        }
    }
}

/// Leaf entries of one characteristic vector, before padding.
pub fn leaf_entries(cv: &CharVector, params: &TreeParams) -> Vec<Segment> {
    let leaf = params.leaf_len;
    let mut out = Vec::new();
    for w in 0..params.n_pad / leaf {
        let lo = w * leaf;
        let ones: Vec<usize> = cv.recovery.range(lo..lo + leaf).map(|(&p, _)| p).collect();
        if ones.is_empty() {
            out.push(Segment {
                offset: lo,
                ones,
                real: true,
            });
        } else {
            out.extend(ones.chunks(params.cap).map(|chunk| Segment {
                offset: lo,
                ones: chunk.to_vec(),
                real: true,
            }));
        }
    }
    out
}

/// Segments per bucket and depth, for both sides.
#[derive(Debug, Clone)]
pub struct Layout {
    pub params: TreeParams,
    /// Leaf entries per bucket after padding (a power of two).
    pub c: usize,
    /// Root depth, `log2 c`.
    pub depth: usize,
    /// `[bucket][depth][k]`
    pub a: Vec<Vec<Vec<Segment>>>,
    pub b: Vec<Vec<Vec<Segment>>>,
}

impl Layout {
    pub fn build(a_vecs: &[CharVector], b_vecs: &[CharVector], params: TreeParams) -> Self {
        let leaves_a: Vec<Vec<Segment>> = a_vecs.iter().map(|v| leaf_entries(v, &params)).collect();
        let leaves_b: Vec<Vec<Segment>> = b_vecs.iter().map(|v| leaf_entries(v, &params)).collect();
        let c = leaves_a
            .iter()
            .chain(&leaves_b)
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .max(1)
            .next_power_of_two();
        let depth = c.trailing_zeros() as usize;
        let grow = |mut leaves: Vec<Segment>| -> Vec<Vec<Segment>> {
            leaves.resize(c, Segment::padding(params.n_pad));
            let mut levels = vec![leaves];
            for _ in 0..depth {
                let below = levels.last().expect("at least the leaf level");
                let up = below
                    .chunks(2)
                    .map(|pair| Segment::merge(&pair[0], &pair[1], params.n_pad))
                    .collect();
                levels.push(up);
            }
            levels
        };
        Self {
            params,
            c,
            depth,
            a: leaves_a.into_iter().map(grow).collect(),
            b: leaves_b.into_iter().map(grow).collect(),
        }
    }

    pub fn nodes_at(&self, depth: usize) -> usize {
        self.c >> depth
    }
}

/// Stored convolutions for one bucket pair, `[depth][ka * nodes + kb]`.
/// Non-explicit depths and pairs involving padding hold empty vectors.
#[derive(Debug, Clone, Default)]
pub struct ExplicitConvs {
    pub by_depth: Vec<Vec<Vec<u32>>>,
}

impl ExplicitConvs {
    pub fn words(&self) -> u64 {
        self.by_depth.iter().flatten().map(|c| c.len() as u64).sum()
    }

    pub fn get(&self, depth: usize, index: usize) -> Option<&[u32]> {
        self.by_depth.get(depth)?.get(index).map(Vec::as_slice)
    }
}

/// Per-query work counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TsCounters {
    /// Queries issued to shift-set instances.
    pub sd_queries: u64,
    pub false_witnesses: u64,
    pub nodes_visited: u64,
    pub probes: u64,
}

impl TsCounters {
    pub fn merge(self, o: TsCounters) -> TsCounters {
        TsCounters {
            sd_queries: self.sd_queries + o.sd_queries,
            false_witnesses: self.false_witnesses + o.false_witnesses,
            nodes_visited: self.nodes_visited + o.nodes_visited,
            probes: self.probes + o.probes,
        }
    }
}

/// Layout plus the shared shift-set instances for a family of buckets.
pub struct Forest {
    pub layout: Layout,
    pub a_vecs: Vec<CharVector>,
    pub b_vecs: Vec<CharVector>,
    /// Indexed by depth; SI mode keeps its leaf instance at depth 0.
    instances: Vec<Option<ShiftSetInstance>>,
}

impl Forest {
    pub fn build(
        a_vecs: Vec<CharVector>,
        b_vecs: Vec<CharVector>,
        params: TreeParams,
        inner: &InnerBuilders,
    ) -> Result<Self> {
        let layout = Layout::build(&a_vecs, &b_vecs, params);
        let mut instances = Vec::with_capacity(layout.depth + 1);
        for d in 0..=layout.depth {
            let wanted = params.is_implicit(d) || (d == 0 && params.si);
            if !wanted {
                instances.push(None);
                continue;
            }
            let subs = |side: &[Vec<Vec<Segment>>]| -> Vec<Vec<usize>> {
                side.iter()
                    .flat_map(|levels| levels[d].iter().map(Segment::local_ones))
                    .collect()
            };
            let mut inst = build_shift_sets(&subs(&layout.a), &subs(&layout.b), params.len_at(d))?;
            let attached = if params.si {
                ShiftInner::Reporting((inner.si)(inst.system())?)
            } else {
                ShiftInner::Disjoint((inner.sd)(inst.system())?)
            };
            inst.attach(attached);
            instances.push(Some(inst));
        }
        Ok(Self {
            layout,
            a_vecs,
            b_vecs,
            instances,
        })
    }

    pub fn params(&self) -> &TreeParams {
        &self.layout.params
    }

    pub fn instance(&self, depth: usize) -> Option<&ShiftSetInstance> {
        self.instances.get(depth)?.as_ref()
    }

    pub fn instances(&self) -> impl Iterator<Item = (usize, &ShiftSetInstance)> {
        self.instances
            .iter()
            .enumerate()
            .filter_map(|(d, i)| Some((d, i.as_ref()?)))
    }

    /// Convolution of two nodes recomputed from their ones.
    pub fn direct_conv(&self, ia: usize, jb: usize, depth: usize, ka: usize, kb: usize) -> Vec<u32> {
        let sa = &self.layout.a[ia][depth][ka];
        let sb = &self.layout.b[jb][depth][kb];
        if !sa.real || !sb.real {
            return Vec::new();
        }
        convolve_sparse(&sa.local_ones(), &sb.local_ones(), self.params().len_at(depth))
    }

    /// Parent convolution as the offset-aligned sum of its four children's.
    pub fn aligned_child_sum(
        &self,
        ia: usize,
        jb: usize,
        depth: usize,
        ka: usize,
        kb: usize,
        child: impl Fn(usize, usize) -> Vec<u32>,
    ) -> Vec<u32> {
        let pa = &self.layout.a[ia][depth][ka];
        let pb = &self.layout.b[jb][depth][kb];
        if !pa.real || !pb.real {
            return Vec::new();
        }
        let mut out = vec![0u32; 2 * self.params().len_at(depth) - 1];
        for ca in [2 * ka, 2 * ka + 1] {
            for cb in [2 * kb, 2 * kb + 1] {
                let sa = &self.layout.a[ia][depth - 1][ca];
                let sb = &self.layout.b[jb][depth - 1][cb];
                if !sa.real || !sb.real {
                    continue;
                }
                let shift = (sa.offset - pa.offset) + (sb.offset - pb.offset);
                for (k, &v) in child(ca, cb).iter().enumerate() {
                    if v != 0 {
                        out[k + shift] += v;
                    }
                }
            }
        }
        out
    }

    /// Explicit convolutions for one bucket pair: the lowest explicit depth
    /// directly, every depth above from its children.
    pub fn explicit_for(&self, ia: usize, jb: usize) -> ExplicitConvs {
        let params = *self.params();
        let mut by_depth: Vec<Vec<Vec<u32>>> = vec![Vec::new(); self.layout.depth + 1];
        for d in 0..=self.layout.depth {
            if !params.is_explicit(d) {
                continue;
            }
            let nodes = self.layout.nodes_at(d);
            let below_explicit = d > 0 && params.is_explicit(d - 1);
            let mut level = Vec::with_capacity(nodes * nodes);
            for ka in 0..nodes {
                for kb in 0..nodes {
                    level.push(if below_explicit {
                        let child_nodes = self.layout.nodes_at(d - 1);
                        let below = &by_depth[d - 1];
                        self.aligned_child_sum(ia, jb, d, ka, kb, |ca, cb| below[ca * child_nodes + cb].clone())
                    } else {
                        self.direct_conv(ia, jb, d, ka, kb)
                    });
                }
            }
            by_depth[d] = level;
        }
        ExplicitConvs { by_depth }
    }

    /// Whether the node pair's convolution is nonzero at local index `local`,
    /// from whichever representation its depth uses.
    #[allow(clippy::too_many_arguments)]
    pub fn node_nonzero(
        &self,
        explicit: &ExplicitConvs,
        ia: usize,
        jb: usize,
        depth: usize,
        (ka, kb): (usize, usize),
        local: usize,
        counters: &mut TsCounters,
    ) -> Result<bool> {
        let params = self.params();
        if params.is_explicit(depth) {
            counters.probes += 1;
            let idx = ka * self.layout.nodes_at(depth) + kb;
            return Ok(explicit
                .get(depth, idx)
                .and_then(|c| c.get(local))
                .is_some_and(|&v| v > 0));
        }
        let inst = self
            .instance(depth)
            .ok_or_else(|| invalid(format!("no instance at depth {depth}")))?;
        let nodes = self.layout.nodes_at(depth);
        let mut meter = CostMeter::default();
        let hit = conv_position_nonzero(inst, ia * nodes + ka, jb * nodes + kb, local, &mut meter)?;
        counters.sd_queries += 1;
        counters.probes += meter.probes;
        Ok(hit)
    }

    /// Walks the tree of bucket pair `(ia, jb)` towards absolute convolution
    /// index `target` and collects verified pairs summing to `z`.
    #[allow(clippy::too_many_arguments)]
    pub fn search(
        &self,
        explicit: &ExplicitConvs,
        ia: usize,
        jb: usize,
        target: usize,
        z: i64,
        stop_first: bool,
        out: &mut Vec<(i64, i64)>,
        counters: &mut TsCounters,
    ) -> Result<()> {
        self.visit(
            explicit,
            ia,
            jb,
            self.layout.depth,
            (0, 0),
            target,
            z,
            stop_first,
            out,
            counters,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn visit(
        &self,
        explicit: &ExplicitConvs,
        ia: usize,
        jb: usize,
        depth: usize,
        (ka, kb): (usize, usize),
        target: usize,
        z: i64,
        stop_first: bool,
        out: &mut Vec<(i64, i64)>,
        counters: &mut TsCounters,
    ) -> Result<()> {
        let sa = &self.layout.a[ia][depth][ka];
        let sb = &self.layout.b[jb][depth][kb];
        if sa.ones.is_empty() || sb.ones.is_empty() || target < sa.offset + sb.offset {
            return Ok(());
        }
        let local = target - sa.offset - sb.offset;
        if local > 2 * self.params().len_at(depth) - 2 {
            return Ok(());
        }
        counters.nodes_visited += 1;
        if depth == 0 {
            return self.leaf(explicit, ia, jb, (ka, kb), local, z, stop_first, out, counters);
        }
        if !self.node_nonzero(explicit, ia, jb, depth, (ka, kb), local, counters)? {
            return Ok(());
        }
        for ca in [2 * ka, 2 * ka + 1] {
            for cb in [2 * kb, 2 * kb + 1] {
                self.visit(
                    explicit,
                    ia,
                    jb,
                    depth - 1,
                    (ca, cb),
                    target,
                    z,
                    stop_first,
                    out,
                    counters,
                )?;
                if stop_first && !out.is_empty() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn leaf(
        &self,
        explicit: &ExplicitConvs,
        ia: usize,
        jb: usize,
        (ka, kb): (usize, usize),
        local: usize,
        z: i64,
        stop_first: bool,
        out: &mut Vec<(i64, i64)>,
        counters: &mut TsCounters,
    ) -> Result<()> {
        let params = *self.params();
        let sa = &self.layout.a[ia][0][ka];
        let sb = &self.layout.b[jb][0][kb];
        let positions: Vec<(usize, usize)> = if params.si {
            let inst = self.instance(0).ok_or_else(|| invalid("missing leaf instance"))?;
            let nodes = self.layout.nodes_at(0);
            let mut meter = CostMeter::default();
            let local_pairs = conv_position_witnesses(inst, ia * nodes + ka, jb * nodes + kb, local, &mut meter)?;
            counters.sd_queries += 1;
            counters.probes += meter.probes;
            local_pairs
                .into_iter()
                .map(|(pa, pb)| (pa + sa.offset, pb + sb.offset))
                .collect()
        } else {
            if params.is_explicit(0) && !self.node_nonzero(explicit, ia, jb, 0, (ka, kb), local, counters)? {
                return Ok(());
            }
            // 2SUM over the one positions of the two leaf entries.
            let pa: Vec<i64> = sa.ones.iter().map(|&p| p as i64).collect();
            let pb: Vec<i64> = sb.ones.iter().map(|&p| p as i64).collect();
            let target = (local + sa.offset + sb.offset) as i64;
            let mut meter = CostMeter::default();
            let pairs = twosum_scan(&pa, &pb, target, &mut meter);
            counters.probes += meter.probes;
            pairs.into_iter().map(|(x, y)| (x as usize, y as usize)).collect()
        };
        for (pa, pb) in positions {
            for &x in self.a_vecs[ia].originals(pa) {
                for &y in self.b_vecs[jb].originals(pb) {
                    counters.probes += 1;
                    if i128::from(x) + i128::from(y) == i128::from(z) {
                        out.push((x, y));
                        if stop_first {
                            return Ok(());
                        }
                    } else {
                        counters.false_witnesses += 1;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A single hybrid quad tree over one pair of characteristic vectors.
pub struct HybridQuadTree {
    pub forest: Forest,
    pub explicit: ExplicitConvs,
}

/// Builds the tree for `v_a`, `v_b` (both of length `n`) with `R = ceil(sqrt X)`.
pub fn build_quadtree(
    v_a: &CharVector,
    v_b: &CharVector,
    x: usize,
    eps: f64,
    inner: &InnerBuilders,
) -> Result<HybridQuadTree> {
    if v_a.len != v_b.len {
        return Err(invalid("characteristic vectors differ in length"));
    }
    let params = TreeParams::new(v_a.len, x, eps, false)?;
    if params.n_pad != v_a.len.max(1) {
        return Err(invalid(format!("vector length {} must be a power of two", v_a.len)));
    }
    let forest = Forest::build(vec![v_a.clone()], vec![v_b.clone()], params, inner)?;
    let explicit = forest.explicit_for(0, 0);
    Ok(HybridQuadTree { forest, explicit })
}

impl HybridQuadTree {
    pub fn params(&self) -> &TreeParams {
        self.forest.params()
    }

    pub fn root_conv(&self) -> Option<&[u32]> {
        self.explicit.get(self.forest.layout.depth, 0)
    }

    /// Nonzero test at depth `depth`, node pair `(ka, kb)`, local index `j`.
    pub fn probe(&self, depth: usize, ka: usize, kb: usize, j: usize) -> Result<bool> {
        let mut counters = TsCounters::default();
        self.forest
            .node_nonzero(&self.explicit, 0, 0, depth, (ka, kb), j, &mut counters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadtree::conv::convolve;

    fn cv(len: usize, ones: &[usize]) -> CharVector {
        CharVector::from_positions(len, ones)
    }

    #[test]
    fn params_geometry() {
        let p = TreeParams::new(512, 64, 0.25, false).unwrap();
        assert_eq!((p.r, p.top_exp, p.implicit, p.leaf_len, p.cap), (8, 7, 3, 16, 2));
        let p = TreeParams::new(16, 4, 0.0, false).unwrap();
        assert_eq!((p.implicit, p.leaf_len), (0, 4));
        assert!(p.is_explicit(0));
        let p = TreeParams::new(128, 16, 0.3, true).unwrap();
        assert_eq!((p.implicit, p.leaf_len, p.cap), (0, 16, 4));
        assert!(!p.is_explicit(0));
        assert!(TreeParams::new(16, 8, 0.1, false).is_err());
    }

    #[test]
    fn plain_quad_tree_root() {
        let a = cv(16, &[0, 3, 5, 9, 15]);
        let b = cv(16, &[1, 2, 8, 14]);
        let t = build_quadtree(&a, &b, 4, 0.0, &InnerBuilders::default()).unwrap();
        let full = convolve(&a.bits(), &b.bits()).unwrap();
        let root = t.root_conv().unwrap();
        assert_eq!(&root[..full.len()], &full[..]);
        assert!(root[full.len()..].iter().all(|&v| v == 0));
    }

    #[test]
    fn dense_window_is_duplicated() {
        // X = 16, R = 4, ε = 0: leaves of length 16 with at most 4 ones.
        let a = cv(64, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14]);
        let b = cv(64, &[]);
        let t = build_quadtree(&a, &b, 16, 0.0, &InnerBuilders::default()).unwrap();
        let leaves = &t.forest.layout.a[0][0];
        let copies = leaves.iter().filter(|s| s.real && s.offset == 0).count();
        assert_eq!(copies, 4);
        assert!(leaves.iter().all(|s| s.ones.len() <= 4));
    }
}
