use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Hash family selector for the bucket and position hashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HashFamily {
    /// `h(x) = a x mod range`: exactly linear.
    #[default]
    MulMod,
    /// `h(x) = (a x mod 2^64) >> (64 - s)`: almost linear with `c_h = -1`.
    MultiplyShift,
}

impl FromStr for HashFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mulmod" | "linear" => Ok(Self::MulMod),
            "multshift" | "multiply-shift" => Ok(Self::MultiplyShift),
            other => Err(invalid(format!("unknown hash family `{other}`"))),
        }
    }
}

/// A hash `Z -> [0, range)` with `h(x) + h(x') ≡ h(x + x') + c_h + δ (mod range)`
/// for some `δ` in `0..candidate_count()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearHash {
    MulMod { a: u64, range: u64 },
    MultiplyShift { a: u64, bits: u32 },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl LinearHash {
    /// Draws a function with the given range. Multiply-shift needs a power of two.
    pub fn sample(family: HashFamily, range: u64, rng: &mut impl Rng) -> Result<Self> {
        if range == 0 {
            return Err(invalid("hash range must be positive"));
        }
        match family {
            HashFamily::MulMod => {
                let a = if range == 1 {
                    1
                } else {
                    loop {
                        let a = rng.gen_range(1..range);
                        if gcd(a, range) == 1 {
                            break a;
                        }
                    }
                };
                Ok(Self::MulMod { a, range })
            }
            HashFamily::MultiplyShift => {
                if !range.is_power_of_two() {
                    return Err(invalid(format!(
                        "multiply-shift needs a power-of-two range, got {range}"
                    )));
                }
                Ok(Self::MultiplyShift {
                    a: rng.gen::<u64>() | 1,
                    bits: range.trailing_zeros(),
                })
            }
        }
    }

    pub fn range(&self) -> u64 {
        match *self {
            Self::MulMod { range, .. } => range,
            Self::MultiplyShift { bits, .. } => 1 << bits,
        }
    }

    #[inline]
    pub fn apply(&self, x: i64) -> u64 {
        match *self {
            Self::MulMod { a, range } => (i128::from(a) * i128::from(x)).rem_euclid(i128::from(range)) as u64,
            Self::MultiplyShift { a, bits } => {
                if bits == 0 {
                    0
                } else {
                    a.wrapping_mul(x as u64) >> (64 - bits)
                }
            }
        }
    }

    pub fn correction(&self) -> i64 {
        match self {
            Self::MulMod { .. } => 0,
            Self::MultiplyShift { .. } => -1,
        }
    }

    pub fn candidate_count(&self) -> usize {
        match self {
            Self::MulMod { .. } => 1,
            Self::MultiplyShift { .. } => 2,
        }
    }

    /// Residues `h(x) + h(y) mod range` can take when `x + y = z`.
    pub fn sum_candidates(&self, z: i64) -> Vec<u64> {
        let range = self.range() as i128;
        let hz = i128::from(self.apply(z));
        let mut out: Vec<u64> = (0..self.candidate_count() as i128)
            .map(|delta| (hz + i128::from(self.correction()) + delta).rem_euclid(range) as u64)
            .collect();
        out.dedup();
        out
    }
}
