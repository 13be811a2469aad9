use std::collections::HashMap;

use crate::cost::CostMeter;
use crate::error::{invalid, Result};
use crate::index::{tri_index, tri_len, SetIndex, SetStore};
use crate::instance::SetSystem;
use crate::oracle::{intersect_sorted, QueryResult};

/// Frequency-balanced tree over value ranges.
///
/// A node at level `l` covers a value range and tracks the sets whose
/// restriction to that range still has more than `r >> l` elements. Inner
/// nodes store a disjointness bit per member pair and one kept element that
/// splits the remaining mass in half; leaves store full intersection lists.
#[derive(Debug, Clone)]
pub struct Alg2 {
    r: usize,
    levels: usize,
    universe: u32,
    store: SetStore,
    nodes: Vec<Node>,
    root: Option<usize>,
}

#[derive(Debug, Clone)]
struct Node {
    lo: u32,
    hi: u32,
    slot: HashMap<usize, usize>,
    kind: NodeKind,
}

#[derive(Debug, Clone)]
enum NodeKind {
    Inner {
        /// Packed upper triangle; a set bit means the restricted pair is disjoint.
        disjoint: Vec<u64>,
        kept: Option<u32>,
        left: Option<usize>,
        right: Option<usize>,
    },
    Leaf {
        lists: Vec<Vec<u32>>,
    },
}

fn restrict(set: &[u32], lo: u32, hi: u32) -> &[u32] {
    let a = set.partition_point(|&e| e < lo);
    let b = set.partition_point(|&e| e <= hi);
    &set[a..b]
}

fn sorted_disjoint(a: &[u32], b: &[u32]) -> bool {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

impl Alg2 {
    pub fn build(sys: &SetSystem, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(invalid("algorithm 2 needs r >= 1"));
        }
        let levels = r.ilog2() as usize + 1;
        let mut st = Self {
            r,
            levels,
            universe: sys.universe(),
            store: SetStore::new(sys),
            nodes: Vec::new(),
            root: None,
        };
        let all: Vec<usize> = (0..sys.m()).collect();
        st.root = st.build_node(&all, 1, sys.universe(), 0);
        Ok(st)
    }

    fn threshold(&self, level: usize) -> usize {
        self.r >> level
    }

    fn build_node(&mut self, candidates: &[usize], lo: u32, hi: u32, level: usize) -> Option<usize> {
        if lo > hi {
            return None;
        }
        let t = self.threshold(level);
        let members: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&c| restrict(self.store.set(c), lo, hi).len() > t)
            .collect();
        if members.is_empty() {
            return None;
        }
        let slot = members.iter().enumerate().map(|(s, &c)| (c, s)).collect();
        let restricted: Vec<&[u32]> = members.iter().map(|&c| restrict(self.store.set(c), lo, hi)).collect();
        let p = members.len();

        let kind = if level + 1 == self.levels {
            let mut lists = Vec::with_capacity(tri_len(p));
            for t in 0..p {
                for s in 0..=t {
                    lists.push(intersect_sorted(restricted[s], restricted[t]));
                }
            }
            NodeKind::Leaf { lists }
        } else {
            let mut disjoint = vec![0u64; tri_len(p).div_ceil(64)];
            for t in 0..p {
                for s in 0..=t {
                    if sorted_disjoint(restricted[s], restricted[t]) {
                        let k = tri_index(s, t);
                        disjoint[k / 64] |= 1 << (k % 64);
                    }
                }
            }
            let kept = balanced_cut(&restricted);
            let node_id = self.nodes.len();
            self.nodes.push(Node {
                lo,
                hi,
                slot,
                kind: NodeKind::Inner {
                    disjoint,
                    kept,
                    left: None,
                    right: None,
                },
            });
            let (left, right) = match kept {
                Some(k) => (
                    if k > lo {
                        self.build_node(&members, lo, k - 1, level + 1)
                    } else {
                        None
                    },
                    if k < hi {
                        self.build_node(&members, k + 1, hi, level + 1)
                    } else {
                        None
                    },
                ),
                None => (None, None),
            };
            if let NodeKind::Inner { left: l, right: r, .. } = &mut self.nodes[node_id].kind {
                *l = left;
                *r = right;
            }
            return Some(node_id);
        };
        self.nodes.push(Node { lo, hi, slot, kind });
        Some(self.nodes.len() - 1)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Checks that every inner node's children cover at most half its mass.
    pub fn balanced(&self) -> bool {
        self.nodes.iter().all(|node| {
            let NodeKind::Inner { left, right, .. } = &node.kind else {
                return true;
            };
            let mass = self.mass(node);
            [left, right].into_iter().flatten().all(|&c| {
                let child = &self.nodes[c];
                let child_mass: usize = node
                    .slot
                    .keys()
                    .map(|&s| restrict(self.store.set(s), child.lo, child.hi).len())
                    .sum();
                2 * child_mass <= mass
            })
        })
    }

    fn mass(&self, node: &Node) -> usize {
        node.slot
            .keys()
            .map(|&s| restrict(self.store.set(s), node.lo, node.hi).len())
            .sum()
    }

    fn query_node(
        &self,
        node: Option<usize>,
        range: (u32, u32),
        i0: usize,
        j0: usize,
        meter: &mut CostMeter,
        out: &mut Vec<u32>,
    ) {
        let (lo, hi) = range;
        if lo > hi {
            return;
        }
        meter.probe(1);
        let a = restrict(self.store.set(i0), lo, hi);
        let b = restrict(self.store.set(j0), lo, hi);
        let member_slots = node.and_then(|id| {
            let n = &self.nodes[id];
            Some((n, *n.slot.get(&i0)?, *n.slot.get(&j0)?))
        });
        let Some((n, s, t)) = member_slots else {
            // Stopper: one side is at or below the level threshold.
            let (small, other) = if a.len() <= b.len() { (a, j0) } else { (b, i0) };
            out.extend(self.store.scan(small, other, meter));
            return;
        };
        let k = tri_index(s, t);
        match &n.kind {
            NodeKind::Leaf { lists } => {
                meter.probe(lists[k].len() as u64);
                out.extend_from_slice(&lists[k]);
            }
            NodeKind::Inner {
                disjoint,
                kept,
                left,
                right,
            } => {
                if disjoint[k / 64] >> (k % 64) & 1 == 1 {
                    return;
                }
                let Some(kept) = *kept else { return };
                self.query_node(*left, (lo, kept.saturating_sub(1)), i0, j0, meter, out);
                meter.probe(2);
                if self.store.table(i0).contains(kept) && self.store.table(j0).contains(kept) {
                    out.push(kept);
                }
                if kept < hi {
                    self.query_node(*right, (kept + 1, hi), i0, j0, meter, out);
                }
            }
        }
    }
}

/// Picks `e_{z+1}`: the value after the longest ascending prefix whose
/// total frequency is at most half the node's mass.
fn balanced_cut(restricted: &[&[u32]]) -> Option<u32> {
    let mut freq: Vec<u32> = restricted.iter().flat_map(|s| s.iter().copied()).collect();
    freq.sort_unstable();
    let mass = freq.len();
    if mass == 0 {
        return None;
    }
    // In sorted multiset order, the prefix of whole values with 2*cum <= mass
    // ends right before the value holding position floor(mass/2).
    let mut cum = 0usize;
    let mut idx = 0;
    while idx < freq.len() {
        let v = freq[idx];
        let run = freq[idx..].partition_point(|&x| x == v);
        if 2 * (cum + run) > mass {
            return Some(v);
        }
        cum += run;
        idx += run;
    }
    None
}

impl SetIndex for Alg2 {
    fn name(&self) -> &str {
        "alg2"
    }

    fn m(&self) -> usize {
        self.store.m()
    }

    fn words(&self) -> u64 {
        let nodes: u64 = self
            .nodes
            .iter()
            .map(|n| {
                let header = 4 + 2 * n.slot.len() as u64;
                header
                    + match &n.kind {
                        NodeKind::Inner { disjoint, .. } => disjoint.len() as u64 + 3,
                        NodeKind::Leaf { lists } => {
                            lists.len() as u64 + lists.iter().map(|l| l.len() as u64).sum::<u64>()
                        }
                    }
            })
            .sum();
        self.store.words() + nodes
    }

    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        meter.begin_query();
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        let mut out = Vec::new();
        self.query_node(self.root, (1, self.universe), i0, j0, meter, &mut out);
        Ok(QueryResult::new(out))
    }
}
