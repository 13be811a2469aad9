//! Seeded instance generators. Every generator is a pure function of its
//! arguments: the same seed always yields the same instance.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::instance::SetSystem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws `(set, element)` pairs i.i.d. uniformly and deduplicates until the
/// system holds exactly `target_n` elements.
pub fn gen_random_instance(m: usize, u: u32, target_n: usize, seed: u64) -> Result<SetSystem> {
    if m == 0 || u == 0 {
        return Err(invalid("generator needs m >= 1 and u >= 1"));
    }
    let cells = m as u128 * u128::from(u);
    if target_n as u128 > cells {
        return Err(invalid(format!("target_n = {target_n} exceeds m*u = {cells}")));
    }
    let mut rng = rng(seed);
    let cells = cells as u64;
    // Past half occupancy, sample the complement so the rejection loop stays short.
    let complement = (target_n as u64) * 2 > cells;
    let wanted = if complement {
        cells - target_n as u64
    } else {
        target_n as u64
    };
    let mut chosen: HashSet<u64> = HashSet::with_capacity(wanted as usize);
    while (chosen.len() as u64) < wanted {
        chosen.insert(rng.gen_range(0..cells));
    }
    let mut sets = vec![Vec::new(); m];
    for cell in 0..cells {
        if chosen.contains(&cell) != complement {
            sets[(cell / u64::from(u)) as usize].push((cell % u64::from(u)) as u32 + 1);
        }
    }
    SetSystem::new(u, sets)
}

/// Each set gets a size drawn uniformly from `0..=max_size` and that many
/// distinct uniform elements. Produces a spread of small, medium and large sets.
pub fn gen_mixed_instance(m: usize, u: u32, max_size: usize, seed: u64) -> Result<SetSystem> {
    if u == 0 {
        return Err(invalid("universe must be non-empty"));
    }
    let mut rng = rng(seed);
    let cap = max_size.min(u as usize);
    let sets = (0..m)
        .map(|_| {
            let size = rng.gen_range(0..=cap);
            sample(&mut rng, u as usize, size)
                .into_iter()
                .map(|e| e as u32 + 1)
                .collect()
        })
        .collect();
    SetSystem::from_unsorted(u, sets)
}

/// Heavy-tailed family for tradeoff sweeps.
///
/// Set sizes follow a stratified discrete Pareto law (about `m / k` sets have
/// more than `k` elements) and elements are drawn without replacement with
/// weights `rank^-skew` over a random ranking of the universe. Larger skew
/// makes the sets closer to nested prefixes of the ranking.
pub fn gen_heavy_tailed(m: usize, u: u32, skew: f64, seed: u64) -> Result<SetSystem> {
    if m == 0 || u == 0 {
        return Err(invalid("generator needs m >= 1 and u >= 1"));
    }
    if !(skew.is_finite() && skew >= 0.0) {
        return Err(invalid(format!("skew {skew} must be a non-negative number")));
    }
    let mut rng = rng(seed);
    let mut ranking: Vec<u32> = (1..=u).collect();
    for k in (1..ranking.len()).rev() {
        let swap = rng.gen_range(0..=k);
        ranking.swap(k, swap);
    }
    let weights: Vec<f64> = (0..u as usize).map(|k| (k as f64 + 1.0).powf(-skew)).collect();
    let mut keyed: Vec<(f64, u32)> = Vec::with_capacity(u as usize);
    let mut sets = Vec::with_capacity(m);
    for i in 0..m {
        let q = (i as f64 + rng.gen::<f64>()) / m as f64;
        let size = ((1.0 / q).floor() as usize).clamp(1, u as usize);
        keyed.clear();
        // Efraimidis-Spirakis: the `size` smallest keys -ln(U)/w form a weighted sample.
        for (k, &w) in weights.iter().enumerate() {
            let draw: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            keyed.push((-draw.ln() / w, ranking[k]));
        }
        if size < keyed.len() {
            keyed.select_nth_unstable_by(size, |a, b| a.0.total_cmp(&b.0));
        }
        sets.push(keyed[..size].iter().map(|&(_, e)| e).collect());
    }
    SetSystem::from_unsorted(u, sets)
}

/// `n` distinct integers drawn uniformly from `0..bound`.
pub fn random_distinct(n: usize, bound: u64, seed: u64) -> Result<Vec<i64>> {
    if (n as u64) > bound {
        return Err(invalid(format!("cannot draw {n} distinct values below {bound}")));
    }
    let mut rng = rng(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = rng.gen_range(0..bound) as i64;
        if seen.insert(v) {
            out.push(v);
        }
    }
    Ok(out)
}
