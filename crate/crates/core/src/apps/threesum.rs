//! 3SUM-Indexing encoding: every `x ∈ S_i` becomes `a = i + M²(x-1)` in `A`
//! and `b = M i + M²(u-x)` in `B`, so `a + b = i + M j + M²(u-1)` exactly
//! when some element lies in both `S_i` and `S_j`.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::instance::SetSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSumEncoding {
    pub m: usize,
    pub u: usize,
    /// Index block width; `M = 2^w_m > m`.
    pub w_m: u32,
    pub w_u: u32,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

fn ceil_log2(v: usize) -> u32 {
    v.max(1).next_power_of_two().trailing_zeros()
}

pub fn threesum_encode(sys: &SetSystem) -> Result<ThreeSumEncoding> {
    let m = sys.m();
    let u = sys.universe() as usize;
    let w_m = ceil_log2(m + 1);
    let w_u = ceil_log2(u);
    if 2 * w_m + w_u > 62 {
        return Err(invalid(format!("encoding needs {} bits", 2 * w_m + w_u)));
    }
    let big_m = 1i64 << w_m;
    let top = big_m * big_m;
    let mut a = Vec::with_capacity(sys.total());
    let mut b = Vec::with_capacity(sys.total());
    for (i0, s) in sys.sets().iter().enumerate() {
        let i = i0 as i64 + 1;
        for &x in s {
            a.push(i + top * (i64::from(x) - 1));
            b.push(big_m * i + top * (u as i64 - i64::from(x)));
        }
    }
    Ok(ThreeSumEncoding { m, u, w_m, w_u, a, b })
}

impl ThreeSumEncoding {
    fn big_m(&self) -> i64 {
        1 << self.w_m
    }

    /// Bit width of the largest encoded value.
    pub fn measured_width(&self) -> u32 {
        let max = self.a.iter().chain(&self.b).copied().max().unwrap_or(0);
        64 - (max as u64).leading_zeros()
    }

    pub fn width_bound(&self) -> u32 {
        2 * self.w_m + self.w_u
    }

    pub fn query_number(&self, i: usize, j: usize) -> Result<i64> {
        threesum_query_number(i, j, self.m, self.u, self.w_m)
    }

    /// `(i, x)` behind an `A` value.
    pub fn decode_a(&self, v: i64) -> (usize, u32) {
        let top = self.big_m() * self.big_m();
        ((v % self.big_m()) as usize, (v / top + 1) as u32)
    }

    /// `(j, y)` behind a `B` value.
    pub fn decode_b(&self, v: i64) -> (usize, u32) {
        let top = self.big_m() * self.big_m();
        (((v % top) / self.big_m()) as usize, (self.u as i64 - v / top) as u32)
    }
}

/// `z = i + M j + M²(u-1)` with `M = 2^w_m`.
pub fn threesum_query_number(i: usize, j: usize, m: usize, u: usize, w_m: u32) -> Result<i64> {
    for k in [i, j] {
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, m });
        }
    }
    let big_m = 1i64 << w_m;
    Ok(i as i64 + big_m * j as i64 + big_m * big_m * (u as i64 - 1))
}

/// Hash-based exact solver over the encoded arrays.
pub struct ThreeSumSolver {
    b_lookup: HashMap<i64, usize>,
    a: Vec<i64>,
}

impl ThreeSumSolver {
    pub fn new(enc: &ThreeSumEncoding) -> Self {
        Self {
            b_lookup: enc.b.iter().enumerate().map(|(k, &v)| (v, k)).collect(),
            a: enc.a.clone(),
        }
    }

    pub fn solve(&self, z: i64) -> Option<(i64, i64)> {
        self.a
            .iter()
            .find_map(|&x| self.b_lookup.get(&(z - x)).map(|_| (x, z - x)))
    }

    /// Every pair `(a, b)` with `a + b = z`, sorted.
    pub fn report(&self, z: i64) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self
            .a
            .iter()
            .filter(|&&x| self.b_lookup.contains_key(&(z - x)))
            .map(|&x| (x, z - x))
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn threesum_indexing_solve(enc: &ThreeSumEncoding, z: i64) -> Option<(i64, i64)> {
    ThreeSumSolver::new(enc).solve(z)
}

pub fn threesum_indexing_report(enc: &ThreeSumEncoding, z: i64) -> Vec<(i64, i64)> {
    ThreeSumSolver::new(enc).report(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::canon1;

    #[test]
    fn canon_values() {
        let enc = threesum_encode(&canon1()).unwrap();
        assert_eq!((enc.w_m, enc.w_u), (2, 2));
        assert!(enc.a.contains(&17));
        assert!(enc.b.contains(&40));
        assert!(enc.b.contains(&52));
        assert_eq!(enc.query_number(1, 2).unwrap(), 57);
        assert_eq!(enc.query_number(1, 3).unwrap(), 61);
        assert_eq!(threesum_indexing_solve(&enc, 57), Some((17, 40)));
        assert_eq!(threesum_indexing_solve(&enc, 61), None);
        assert!(threesum_indexing_report(&enc, 0).is_empty());
        assert_eq!(enc.decode_a(17), (1, 2));
        assert_eq!(enc.decode_b(40), (2, 2));
        assert!(enc.measured_width() <= enc.width_bound());
    }

    #[test]
    fn last_index_does_not_spill() {
        // m = 4 is a power of two; index 4 still fits its block.
        let sys = SetSystem::new(2, vec![vec![1], vec![1], vec![2], vec![2]]).unwrap();
        let enc = threesum_encode(&sys).unwrap();
        let solver = ThreeSumSolver::new(&enc);
        for i in 1..=4 {
            for j in 1..=4 {
                let expect = sys.set(i).unwrap()[0] == sys.set(j).unwrap()[0];
                assert_eq!(
                    solver.solve(enc.query_number(i, j).unwrap()).is_some(),
                    expect,
                    "({i}, {j})"
                );
            }
        }
    }
}
