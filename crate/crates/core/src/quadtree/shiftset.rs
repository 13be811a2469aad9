use crate::cost::CostMeter;
use crate::error::{invalid, Result};
use crate::index::{DisjointIndex, SetIndex};
use crate::instance::SetSystem;

/// Smallest `s` with `s * s >= z`.
pub fn ceil_sqrt(z: usize) -> usize {
    let mut s = (z as f64).sqrt() as usize;
    while s * s < z {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= z {
        s -= 1;
    }
    s
}

/// Structure answering queries over the shift sets.
pub enum ShiftInner {
    Disjoint(Box<dyn DisjointIndex>),
    Reporting(Box<dyn SetIndex>),
}

/// Shift sets for a batch of length-`z` sub-vectors.
///
/// With `s = ceil(sqrt(z))`, A-side vector `v` contributes for each
/// `σ in [0, s)` the set `{z - 1 - p + σ : v[p] = 1}` (its reversal shifted by
/// `σ`); B-side vector `w` contributes for each `t` the set
/// `{p + z - 1 - t s : w[p] = 1}` with negative positions dropped. Then
/// `conv(v, w)[j] > 0` iff the sets for `σ = j mod s` and `t = j / s` meet.
/// Positions are stored shifted by one so the universe is `1..=2z-1`.
pub struct ShiftSetInstance {
    pub z: usize,
    pub s: usize,
    pub t_count: usize,
    pub a_count: usize,
    pub b_count: usize,
    sys: SetSystem,
    inner: Option<ShiftInner>,
}

impl std::fmt::Debug for ShiftSetInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShiftSetInstance")
            .field("z", &self.z)
            .field("s", &self.s)
            .field("sets", &self.sys.m())
            .field("elements", &self.sys.total())
            .finish()
    }
}

/// Builds the shift-set system. Sub-vectors are given by their local one
/// positions, each below `z`.
pub fn build_shift_sets(a_subs: &[Vec<usize>], b_subs: &[Vec<usize>], z: usize) -> Result<ShiftSetInstance> {
    if z == 0 {
        return Err(invalid("sub-vector length must be positive"));
    }
    let s = ceil_sqrt(z);
    let t_count = (2 * z - 2) / s + 1;
    let mut sets = Vec::with_capacity(a_subs.len() * s + b_subs.len() * t_count);
    for ones in a_subs {
        if let Some(&p) = ones.iter().find(|&&p| p >= z) {
            return Err(invalid(format!("position {p} outside sub-vector of length {z}")));
        }
        for sigma in 0..s {
            sets.push(ones.iter().map(|&p| (z - p + sigma) as u32).collect());
        }
    }
    for ones in b_subs {
        if let Some(&p) = ones.iter().find(|&&p| p >= z) {
            return Err(invalid(format!("position {p} outside sub-vector of length {z}")));
        }
        for t in 0..t_count {
            let shift = (z - 1) as i64 - (t * s) as i64;
            let set: Vec<u32> = ones
                .iter()
                .map(|&p| p as i64 + shift)
                .filter(|&q| q >= 0)
                .map(|q| (q + 1) as u32)
                .collect();
            sets.push(set);
        }
    }
    let sys = SetSystem::from_unsorted((2 * z - 1) as u32, sets)?;
    Ok(ShiftSetInstance {
        z,
        s,
        t_count,
        a_count: a_subs.len(),
        b_count: b_subs.len(),
        sys,
        inner: None,
    })
}

impl ShiftSetInstance {
    pub fn attach(&mut self, inner: ShiftInner) {
        self.inner = Some(inner);
    }

    pub fn system(&self) -> &SetSystem {
        &self.sys
    }

    /// 1-based id of the A-side set for sub-vector `a`, shift `sigma`.
    pub fn a_set(&self, a: usize, sigma: usize) -> usize {
        a * self.s + sigma + 1
    }

    /// 1-based id of the B-side set for sub-vector `b`, step `t`.
    pub fn b_set(&self, b: usize, t: usize) -> usize {
        self.a_count * self.s + b * self.t_count + t + 1
    }

    /// The set pair encoding convolution index `j`.
    pub fn pair_for(&self, a: usize, b: usize, j: usize) -> Result<(usize, usize)> {
        if j > 2 * self.z - 2 {
            return Err(invalid(format!("index {j} outside [0, {}]", 2 * self.z - 2)));
        }
        if a >= self.a_count || b >= self.b_count {
            return Err(invalid(format!("sub-vector ({a}, {b}) out of range")));
        }
        Ok((self.a_set(a, j % self.s), self.b_set(b, j / self.s)))
    }

    pub fn words(&self) -> u64 {
        match &self.inner {
            Some(ShiftInner::Disjoint(d)) => d.words(),
            Some(ShiftInner::Reporting(r)) => r.words(),
            None => self.sys.total() as u64,
        }
    }

    pub fn max_set_len(&self) -> usize {
        self.sys.max_set_len()
    }
}

/// Whether `conv(a, b)[j] > 0`, decided by one disjointness query.
pub fn conv_position_nonzero(
    inst: &ShiftSetInstance,
    a: usize,
    b: usize,
    j: usize,
    meter: &mut CostMeter,
) -> Result<bool> {
    let (sa, sb) = inst.pair_for(a, b, j)?;
    let disjoint = match &inst.inner {
        Some(ShiftInner::Disjoint(d)) => d.is_disjoint(sa, sb, meter)?,
        Some(ShiftInner::Reporting(r)) => r.query(sa, sb, meter)?.disjoint(),
        None => return Err(invalid("shift-set instance has no query structure")),
    };
    Ok(!disjoint)
}

/// Every local position pair `(p, j - p)` with ones in both sub-vectors, from
/// one intersection query.
pub fn conv_position_witnesses(
    inst: &ShiftSetInstance,
    a: usize,
    b: usize,
    j: usize,
    meter: &mut CostMeter,
) -> Result<Vec<(usize, usize)>> {
    let (sa, sb) = inst.pair_for(a, b, j)?;
    let Some(ShiftInner::Reporting(r)) = &inst.inner else {
        return Err(invalid("witness recovery needs an intersection structure"));
    };
    let sigma = j % inst.s;
    let common = r.query(sa, sb, meter)?;
    Ok(common
        .elements
        .iter()
        .map(|&e| {
            let q = e as usize - 1;
            let pa = sigma + inst.z - 1 - q;
            (pa, j - pa)
        })
        .collect())
}
