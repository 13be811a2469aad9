use std::collections::HashSet;

use crate::cost::CostMeter;

/// Every pair `(x, y)` with `x + y = z` from two ascending arrays of distinct
/// values, by the two-pointer walk. Probes at most `|a| + |b|`.
pub fn twosum_scan(a: &[i64], b: &[i64], z: i64, meter: &mut CostMeter) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0usize, b.len());
    while i < a.len() && j > 0 {
        meter.probe(1);
        let sum = i128::from(a[i]) + i128::from(b[j - 1]);
        match sum.cmp(&i128::from(z)) {
            std::cmp::Ordering::Equal => {
                out.push((a[i], b[j - 1]));
                i += 1;
                j -= 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j -= 1,
        }
    }
    out
}

/// All witness pairs by brute force over `A × B`, sorted.
pub fn brute_pairs(a: &[i64], b: &[i64], z: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for &x in a {
        for &y in b {
            if i128::from(x) + i128::from(y) == i128::from(z) {
                out.push((x, y));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Whether some `a + b` appears in `c`, by hashing `c`.
pub fn brute_threesum(a: &[i64], b: &[i64], c: &[i64]) -> bool {
    let targets: HashSet<i128> = c.iter().map(|&v| i128::from(v)).collect();
    a.iter()
        .any(|&x| b.iter().any(|&y| targets.contains(&(i128::from(x) + i128::from(y)))))
}
