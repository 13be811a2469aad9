use std::collections::HashSet;

use crate::quadtree::hash::LinearHash;

/// Both arrays split by `h1` into `R` buckets capped at `floor(3n / R)`
/// elements; the excess of an overflowing bucket goes to `L_A` / `L_B`.
#[derive(Debug, Clone)]
pub struct BucketedArrays {
    pub r: usize,
    pub cap: usize,
    pub a_buckets: Vec<Vec<i64>>,
    pub b_buckets: Vec<Vec<i64>>,
    pub overflow_a: Vec<i64>,
    pub overflow_b: Vec<i64>,
    pub sorted_a: Vec<i64>,
    pub sorted_b: Vec<i64>,
    pub lookup_a: HashSet<i64>,
    pub lookup_b: HashSet<i64>,
}

fn split(values: &[i64], r: usize, cap: usize, h1: &LinearHash) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut buckets = vec![Vec::new(); r];
    for &x in values {
        buckets[h1.apply(x) as usize % r].push(x);
    }
    let mut overflow = Vec::new();
    for bucket in &mut buckets {
        bucket.sort_unstable();
        if bucket.len() > cap {
            overflow.extend(bucket.drain(cap..));
        }
    }
    overflow.sort_unstable();
    (buckets, overflow)
}

/// `n` is the larger array length; bucket `i` holds the `x` with `h1(x) = i`.
pub fn bucketize(a: &[i64], b: &[i64], r: usize, h1: &LinearHash) -> BucketedArrays {
    let r = r.max(1);
    let n = a.len().max(b.len());
    let cap = 3 * n / r;
    let (a_buckets, overflow_a) = split(a, r, cap, h1);
    let (b_buckets, overflow_b) = split(b, r, cap, h1);
    let mut sorted_a = a.to_vec();
    sorted_a.sort_unstable();
    let mut sorted_b = b.to_vec();
    sorted_b.sort_unstable();
    BucketedArrays {
        r,
        cap,
        a_buckets,
        b_buckets,
        overflow_a,
        overflow_b,
        lookup_a: a.iter().copied().collect(),
        lookup_b: b.iter().copied().collect(),
        sorted_a,
        sorted_b,
    }
}

impl BucketedArrays {
    pub fn overflow_total(&self) -> usize {
        self.overflow_a.len() + self.overflow_b.len()
    }
}
