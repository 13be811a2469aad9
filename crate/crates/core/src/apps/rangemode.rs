//! Range-mode encoding of a set system, plus a block-decomposition range-mode
//! structure to query it.

use crate::cost::CostMeter;
use crate::error::{invalid, Error, Result};
use crate::index::MembershipTable;
use crate::instance::SetSystem;

/// `STR = T_1 ‖ T_2` over `[u]`, where block `T_{1i}` is `[u] \ S_i` then
/// `S_i` and block `T_{2j}` is `S_j` then `[u] \ S_j`. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeModeEncoding {
    pub m: usize,
    pub u: usize,
    pub str: Vec<u32>,
    /// `a[i-1]`: last position of the prefix of `T_{1i}`.
    pub a: Vec<usize>,
    /// `b[j-1]`: last position of the prefix of `T_{2j}`.
    pub b: Vec<usize>,
}

fn complement(set: &[u32], u: usize) -> Vec<u32> {
    let mut rest = Vec::with_capacity(u - set.len());
    let mut it = set.iter().peekable();
    for x in 1..=u as u32 {
        if it.peek() == Some(&&x) {
            it.next();
        } else {
            rest.push(x);
        }
    }
    rest
}

pub fn rangemode_encode(sys: &SetSystem) -> RangeModeEncoding {
    let m = sys.m();
    let u = sys.universe() as usize;
    let mut str = Vec::with_capacity(2 * m * u);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for s in sys.sets() {
        let rest = complement(s, u);
        str.extend_from_slice(&rest);
        a.push(str.len());
        str.extend_from_slice(s);
    }
    for s in sys.sets() {
        str.extend_from_slice(s);
        b.push(str.len());
        str.extend(complement(s, u));
    }
    RangeModeEncoding { m, u, str, a, b }
}

impl RangeModeEncoding {
    /// Query range `[a_i + 1, b_j]` (empty only when `i = m`, `j = 1` and both
    /// sets are empty) and the frequency that signals `S_i ∩ S_j ≠ ∅`.
    pub fn query_range(&self, i: usize, j: usize) -> Result<((usize, usize), usize)> {
        for k in [i, j] {
            if k == 0 || k > self.m {
                return Err(Error::IndexOutOfRange { index: k, m: self.m });
            }
        }
        Ok(((self.a[i - 1] + 1, self.b[j - 1]), self.m - i + j + 1))
    }
}

/// `(mode, frequency)` of `str[lo..=hi]` (1-based) by counting; ties go to the
/// smallest element.
pub fn brute_mode(str: &[u32], lo: usize, hi: usize) -> Result<(u32, usize)> {
    let all = brute_mode_all(str, lo, hi)?;
    Ok((all.0[0], all.1))
}

/// Every element attaining the mode frequency, sorted, by counting.
pub fn brute_mode_all(str: &[u32], lo: usize, hi: usize) -> Result<(Vec<u32>, usize)> {
    check_range(str.len(), lo, hi)?;
    let mut counts = std::collections::BTreeMap::new();
    for &x in &str[lo - 1..hi] {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    let best = *counts.values().max().expect("non-empty range");
    Ok((
        counts.into_iter().filter(|&(_, c)| c == best).map(|(x, _)| x).collect(),
        best,
    ))
}

fn check_range(len: usize, lo: usize, hi: usize) -> Result<()> {
    if lo == 0 || lo > hi || hi > len {
        return Err(invalid(format!("range [{lo}, {hi}] empty or outside 1..={len}")));
    }
    Ok(())
}

/// Range-mode structure: the string cut into `b` blocks, with the mode of
/// every block span precomputed and per-value position lists for counting.
#[derive(Debug, Clone)]
pub struct RangeModeIndex {
    str: Vec<u32>,
    block_len: usize,
    blocks: usize,
    /// `[s * blocks + t]` for spans `s <= t`: (mode, frequency).
    span_mode: Vec<(u32, usize)>,
    /// Elements tied with the span mode, beyond the mode itself; only kept
    /// by [`RangeModeIndex::build_reporting`].
    span_ties: Option<Vec<Vec<u32>>>,
    /// Sorted 0-based positions per value.
    positions: std::collections::HashMap<u32, Vec<usize>>,
}

pub fn rangemode_build_baseline(str: &[u32], b: usize) -> Result<RangeModeIndex> {
    RangeModeIndex::build(str, b)
}

pub fn rangemode_query_baseline(
    st: &RangeModeIndex,
    lo: usize,
    hi: usize,
    meter: &mut CostMeter,
) -> Result<(u32, usize)> {
    st.query(lo, hi, meter)
}

pub fn rangemode_reporting(
    st: &RangeModeIndex,
    lo: usize,
    hi: usize,
    meter: &mut CostMeter,
) -> Result<(Vec<u32>, usize)> {
    st.query_all(lo, hi, meter)
}

impl RangeModeIndex {
    /// Mode-only structure: `2n + 2b²` words.
    pub fn build(str: &[u32], b: usize) -> Result<Self> {
        Self::build_with(str, b, false)
    }

    /// Also keeps every span's full argmax so [`Self::query_all`] works.
    pub fn build_reporting(str: &[u32], b: usize) -> Result<Self> {
        Self::build_with(str, b, true)
    }

    fn build_with(str: &[u32], b: usize, keep_ties: bool) -> Result<Self> {
        if b == 0 || b > str.len() {
            return Err(invalid(format!("block count {b} outside 1..={}", str.len())));
        }
        let block_len = str.len().div_ceil(b);
        let blocks = str.len().div_ceil(block_len);
        let mut positions: std::collections::HashMap<u32, Vec<usize>> = std::collections::HashMap::new();
        for (p, &x) in str.iter().enumerate() {
            positions.entry(x).or_default().push(p);
        }
        let mut span_mode = vec![(0, 0); blocks * blocks];
        let mut span_ties = vec![Vec::new(); blocks * blocks];
        for s in 0..blocks {
            let mut counts: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
            let mut best = (u32::MAX, 0usize);
            let mut ties: Vec<u32> = Vec::new();
            for t in s..blocks {
                for &x in &str[t * block_len..((t + 1) * block_len).min(str.len())] {
                    let c = counts.entry(x).or_insert(0);
                    *c += 1;
                    match (*c).cmp(&best.1) {
                        std::cmp::Ordering::Greater => {
                            best = (x, *c);
                            ties.clear();
                        }
                        std::cmp::Ordering::Equal => ties.push(x),
                        std::cmp::Ordering::Less => {}
                    }
                }
                let mut all = ties.clone();
                all.push(best.0);
                all.sort_unstable();
                all.dedup();
                span_mode[s * blocks + t] = (all[0], best.1);
                span_ties[s * blocks + t] = all[1..].to_vec();
            }
        }
        Ok(Self {
            str: str.to_vec(),
            block_len,
            blocks,
            span_mode,
            span_ties: keep_ties.then_some(span_ties),
            positions,
        })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// String, position lists, two words per span entry and the tie lists.
    pub fn words(&self) -> u64 {
        let ties: usize = self.span_ties.iter().flatten().map(Vec::len).sum();
        (2 * self.str.len() + 2 * self.span_mode.len() + ties) as u64
    }

    fn count_in(&self, x: u32, lo0: usize, hi0: usize, meter: &mut CostMeter) -> usize {
        let Some(pos) = self.positions.get(&x) else { return 0 };
        meter.probe(2 * (usize::BITS - pos.len().leading_zeros()) as u64 + 1);
        pos.partition_point(|&p| p <= hi0) - pos.partition_point(|&p| p < lo0)
    }

    /// Candidates (span argmax plus partial-block elements) and their counts.
    fn candidates(&self, lo: usize, hi: usize, all_ties: bool, meter: &mut CostMeter) -> Result<Vec<(u32, usize)>> {
        check_range(self.str.len(), lo, hi)?;
        meter.begin_query();
        let (lo0, hi0) = (lo - 1, hi - 1);
        let first_full = lo0.div_ceil(self.block_len);
        let last_full_end = (hi0 + 1) / self.block_len;
        let mut cands: Vec<u32> = Vec::new();
        let (head_end, tail_start) = if first_full < last_full_end {
            let k = first_full * self.blocks + last_full_end - 1;
            meter.probe(1);
            cands.push(self.span_mode[k].0);
            if all_ties {
                let ties = &self
                    .span_ties
                    .as_ref()
                    .ok_or_else(|| invalid("built without tie lists"))?[k];
                meter.probe(ties.len() as u64);
                cands.extend_from_slice(ties);
            }
            (first_full * self.block_len, last_full_end * self.block_len)
        } else {
            (hi0 + 1, hi0 + 1)
        };
        meter.probe((head_end - lo0 + hi0 + 1 - tail_start) as u64);
        cands.extend_from_slice(&self.str[lo0..head_end]);
        cands.extend_from_slice(&self.str[tail_start..=hi0]);
        cands.sort_unstable();
        cands.dedup();
        Ok(cands
            .into_iter()
            .map(|x| (x, self.count_in(x, lo0, hi0, meter)))
            .collect())
    }

    /// `(mode, frequency)` of `str[lo..=hi]`, ties to the smallest element.
    pub fn query(&self, lo: usize, hi: usize, meter: &mut CostMeter) -> Result<(u32, usize)> {
        let cands = self.candidates(lo, hi, false, meter)?;
        let best = cands.iter().map(|c| c.1).max().expect("non-empty range");
        Ok(*cands.iter().find(|c| c.1 == best).expect("maximum is attained"))
    }

    /// All elements attaining the mode frequency, sorted. Needs a structure
    /// from [`Self::build_reporting`].
    pub fn query_all(&self, lo: usize, hi: usize, meter: &mut CostMeter) -> Result<(Vec<u32>, usize)> {
        let cands = self.candidates(lo, hi, true, meter)?;
        let best = cands.iter().map(|c| c.1).max().expect("non-empty range");
        Ok((cands.into_iter().filter(|c| c.1 == best).map(|c| c.0).collect(), best))
    }
}

/// Answers SetDisjointness through range-mode queries on the encoding.
pub struct RangeModeDecider {
    enc: RangeModeEncoding,
    index: RangeModeIndex,
    tables: Vec<MembershipTable>,
}

impl RangeModeDecider {
    /// `b` defaults to `ceil(sqrt |STR|)` blocks.
    pub fn build(sys: &SetSystem, b: Option<usize>) -> Result<Self> {
        let enc = rangemode_encode(sys);
        let len = enc.str.len();
        if len == 0 {
            return Err(invalid("encoding is empty"));
        }
        let b = b.unwrap_or_else(|| (len as f64).sqrt().ceil() as usize).clamp(1, len);
        let index = RangeModeIndex::build_reporting(&enc.str, b)?;
        let tables = sys.sets().iter().map(|s| MembershipTable::new(s)).collect();
        Ok(Self { enc, index, tables })
    }

    pub fn encoding(&self) -> &RangeModeEncoding {
        &self.enc
    }

    /// Intersecting iff the mode frequency reaches `m - i + j + 1`.
    pub fn intersects_by_frequency(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<bool> {
        let ((lo, hi), threshold) = self.enc.query_range(i, j)?;
        if lo > hi {
            return Ok(false);
        }
        Ok(self.index.query(lo, hi, meter)?.1 == threshold)
    }

    /// Intersecting iff the reported mode lies in both sets.
    pub fn intersects_by_membership(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<bool> {
        let ((lo, hi), _) = self.enc.query_range(i, j)?;
        if lo > hi {
            return Ok(false);
        }
        let (mode, _) = self.index.query(lo, hi, meter)?;
        meter.probe(2);
        Ok(self.tables[i - 1].contains(mode) && self.tables[j - 1].contains(mode))
    }

    /// `S_i ∩ S_j` as the elements reaching the threshold frequency.
    pub fn intersection(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<Vec<u32>> {
        let ((lo, hi), threshold) = self.enc.query_range(i, j)?;
        if lo > hi {
            return Ok(Vec::new());
        }
        let (all, freq) = self.index.query_all(lo, hi, meter)?;
        Ok(if freq == threshold { all } else { Vec::new() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mini() -> SetSystem {
        SetSystem::new(3, vec![vec![1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn mini_encoding() {
        let enc = rangemode_encode(&mini());
        assert_eq!(enc.str, vec![2, 3, 1, 1, 2, 3, 1, 2, 3, 2, 3, 1]);
        assert_eq!(enc.a, vec![2, 4]);
        assert_eq!(enc.b, vec![7, 11]);
        assert_eq!(enc.query_range(1, 2).unwrap(), ((3, 11), 4));
        assert_eq!(enc.query_range(1, 1).unwrap(), ((3, 7), 3));
        assert!(enc.query_range(0, 1).is_err());
    }

    #[test]
    fn empty_set_prefix_is_whole_block() {
        let sys = SetSystem::new(3, vec![vec![], vec![2]]).unwrap();
        let enc = rangemode_encode(&sys);
        assert_eq!(enc.a[0], 3);
        assert_eq!(&enc.str[..3], &[1, 2, 3]);
    }

    #[test]
    fn mini_baseline() {
        let enc = rangemode_encode(&mini());
        let st = RangeModeIndex::build_reporting(&enc.str, 3).unwrap();
        let mut m = CostMeter::default();
        assert!(RangeModeIndex::build(&enc.str, 3)
            .unwrap()
            .query_all(1, 12, &mut m)
            .is_err());
        assert_eq!(st.query(3, 11, &mut m).unwrap(), (1, 3));
        assert_eq!(st.query(5, 5, &mut m).unwrap(), (2, 1));
        assert_eq!(st.query(1, 12, &mut m).unwrap(), (1, 4));
        assert_eq!(st.query_all(1, 12, &mut m).unwrap(), (vec![1, 2, 3], 4));
        assert_eq!(st.query_all(3, 11, &mut m).unwrap(), (vec![1, 2, 3], 3));
        assert_eq!(st.query_all(5, 5, &mut m).unwrap(), (vec![2], 1));
        assert!(st.query(4, 3, &mut m).is_err());
        assert!(RangeModeIndex::build(&enc.str, 0).is_err());
    }

    #[test]
    fn single_set_against_itself() {
        for set in [vec![], vec![2]] {
            let sys = SetSystem::new(2, vec![set.clone()]).unwrap();
            let d = RangeModeDecider::build(&sys, None).unwrap();
            let mut m = CostMeter::default();
            assert_eq!(d.intersects_by_frequency(1, 1, &mut m).unwrap(), !set.is_empty());
        }
    }
}
