use rand::Rng;

use crate::error::{Error, Result};
use crate::gen::rng;
use crate::instance::SetSystem;
use crate::universe::classify::{Mode, SizeClassification};

const PRIME: u64 = (1 << 61) - 1;

/// `h(x) = ((a x + b) mod p) mod range + 1` with `p = 2^61 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalHash {
    pub a: u64,
    pub b: u64,
    pub range: u32,
}

impl UniversalHash {
    pub fn sample(rng: &mut impl Rng, range: u32) -> Self {
        Self {
            a: rng.gen_range(1..PRIME),
            b: rng.gen_range(0..PRIME),
            range,
        }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let v = (u128::from(self.a) * u128::from(x) + u128::from(self.b)) % u128::from(PRIME);
        (v % u128::from(self.range)) as u32 + 1
    }

    /// Sorted, deduplicated image of a set.
    pub fn image(&self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone)]
pub struct HashBattery {
    pub functions: Vec<UniversalHash>,
    pub rounds_used: usize,
}

impl HashBattery {
    pub fn k(&self) -> usize {
        self.functions.len()
    }
}

/// Number of functions in a battery: `ceil(log2 max(N, m, 2))`.
pub fn battery_size(sys: &SetSystem) -> usize {
    let n = sys.total().max(sys.m()).max(2);
    n.next_power_of_two().ilog2() as usize
}

/// Hashed common values of `a` and `b` that are not the image of a true
/// common element.
pub fn false_positives(h: &UniversalHash, a: &[u32], b: &[u32]) -> usize {
    let common: Vec<u32> = crate::oracle::intersect_sorted(a, b);
    let true_images = h.image(&common);
    let hashed = crate::oracle::intersect_sorted(&h.image(a), &h.image(b));
    hashed.len() - crate::oracle::intersect_sorted(&hashed, &true_images).len()
}

/// The medium pairs a battery must resolve: disjoint pairs in SD mode, every
/// distinct pair in SI mode (reporting queries must terminate for all of them).
fn pairs_to_check(sys: &SetSystem, class: &SizeClassification) -> Vec<(usize, usize)> {
    let ids = &class.medium_ids;
    let mut out = Vec::new();
    for (x, &i) in ids.iter().enumerate() {
        for &j in &ids[x + 1..] {
            let keep = match class.mode {
                Mode::Sd => crate::oracle::intersect_sorted(&sys.sets()[i], &sys.sets()[j]).is_empty(),
                Mode::Si => true,
            };
            if keep {
                out.push((i, j));
            }
        }
    }
    out
}

fn battery_ok(sys: &SetSystem, pairs: &[(usize, usize)], fns: &[UniversalHash], budget: usize) -> bool {
    let images: Vec<Vec<Vec<u32>>> = fns
        .iter()
        .map(|h| sys.sets().iter().map(|s| h.image(s)).collect())
        .collect();
    pairs.iter().all(|&(i, j)| {
        let (a, b) = (&sys.sets()[i], &sys.sets()[j]);
        let common = crate::oracle::intersect_sorted(a, b);
        fns.iter().zip(&images).any(|(h, img)| {
            let hashed = crate::oracle::intersect_sorted(&img[i], &img[j]);
            if hashed.len() <= budget {
                return true;
            }
            let true_images = h.image(&common);
            hashed.len() - crate::oracle::intersect_sorted(&hashed, &true_images).len() <= budget
        })
    })
}

/// Samples batteries of `ceil(log2 n)` functions into `[1, 8u]` until every
/// checked medium pair has some function with at most `budget` false positives.
pub fn select_hash_battery(
    sys: &SetSystem,
    class: &SizeClassification,
    u: u32,
    budget: usize,
    max_rounds: usize,
    seed: u64,
) -> Result<HashBattery> {
    let k = battery_size(sys);
    let range = 8 * u;
    let pairs = pairs_to_check(sys, class);
    let mut rng = rng(seed);
    for round in 1..=max_rounds {
        let functions: Vec<UniversalHash> = (0..k).map(|_| UniversalHash::sample(&mut rng, range)).collect();
        if battery_ok(sys, &pairs, &functions, budget) {
            return Ok(HashBattery {
                functions,
                rounds_used: round,
            });
        }
    }
    Err(Error::BatteryExhausted { rounds: max_rounds })
}

/// Exhaustive re-check of the battery invariant, recomputed from scratch.
pub fn verify_battery(sys: &SetSystem, class: &SizeClassification, battery: &HashBattery, budget: usize) -> bool {
    let sets = sys.sets();
    let ids = &class.medium_ids;
    for (x, &i) in ids.iter().enumerate() {
        for &j in &ids[x + 1..] {
            let disjoint = sets[i].iter().all(|e| sets[j].binary_search(e).is_err());
            if class.mode == Mode::Sd && !disjoint {
                continue;
            }
            let ok = battery
                .functions
                .iter()
                .any(|h| false_positives(h, &sets[i], &sets[j]) <= budget);
            if !ok {
                return false;
            }
        }
    }
    true
}
