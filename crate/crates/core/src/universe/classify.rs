use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::instance::SetSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Disjointness only.
    Sd,
    /// Full intersection reporting.
    Si,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sd" => Ok(Self::Sd),
            "si" => Ok(Self::Si),
            other => Err(invalid(format!("unknown mode `{other}`, expected sd or si"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sd => "sd",
            Self::Si => "si",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

/// Partition of the sets by size. Small sets have at most `small_max`
/// elements, large sets at least `large_min`; small takes precedence when
/// the two ranges overlap.
#[derive(Debug, Clone)]
pub struct SizeClassification {
    pub mode: Mode,
    pub small_max: usize,
    pub large_min: usize,
    /// 0-based ids, ascending.
    pub large_ids: Vec<usize>,
    pub medium_ids: Vec<usize>,
    pub small_ids: Vec<usize>,
    class: Vec<SizeClass>,
    /// Rank of each set within its class (`p` for large, `q` for medium).
    rank: Vec<usize>,
}

impl SizeClassification {
    pub fn d(&self) -> usize {
        self.large_ids.len()
    }

    pub fn e(&self) -> usize {
        self.medium_ids.len()
    }

    /// Class of the 0-based set `i0`.
    pub fn class_of(&self, i0: usize) -> SizeClass {
        self.class[i0]
    }

    /// Row index of a large set or column offset of a medium set.
    pub fn rank_of(&self, i0: usize) -> usize {
        self.rank[i0]
    }

    /// Column of `i0` in the `d × (d + e)` answer matrix, if it has one.
    pub fn column_of(&self, i0: usize) -> Option<usize> {
        match self.class[i0] {
            SizeClass::Large => Some(self.rank[i0]),
            SizeClass::Medium => Some(self.d() + self.rank[i0]),
            SizeClass::Small => None,
        }
    }
}

fn floor_pow(u: u32, exponent: f64) -> usize {
    // A tiny nudge keeps exact powers (e.g. 16^0.5) from flooring to one less.
    (f64::from(u).powf(exponent) + 1e-9).floor() as usize
}

/// Splits the sets into small, medium and large classes.
///
/// SD mode: small iff `|S| <= floor(u^(1/2 - eps))`, large iff `|S| > sqrt(u)`.
/// SI mode: small iff `|S| <= floor(u^(alpha - eps))`, large iff
/// `|S| >= floor(u^(alpha - 3 eps / 4))`.
pub fn classify(sys: &SetSystem, u: u32, eps: f64, mode: Mode, alpha: f64) -> Result<SizeClassification> {
    if u < 2 {
        return Err(invalid(format!("universe size {u} must be at least 2")));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(invalid(format!("eps = {eps} outside (0, 1/2]")));
    }
    if mode == Mode::Si && !(0.5..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha = {alpha} outside [1/2, 1]")));
    }
    if let Some(&e) = sys.sets().iter().filter_map(|s| s.last()).max() {
        if e > u {
            return Err(invalid(format!("element {e} exceeds u = {u}")));
        }
    }
    let (small_max, large_min) = match mode {
        Mode::Sd => (floor_pow(u, 0.5 - eps), floor_pow(u, 0.5) + 1),
        Mode::Si => (floor_pow(u, alpha - eps), floor_pow(u, alpha - 0.75 * eps)),
    };
    let mut out = SizeClassification {
        mode,
        small_max,
        large_min,
        large_ids: Vec::new(),
        medium_ids: Vec::new(),
        small_ids: Vec::new(),
        class: Vec::with_capacity(sys.m()),
        rank: Vec::with_capacity(sys.m()),
    };
    for (i, set) in sys.sets().iter().enumerate() {
        let len = set.len();
        let (class, bucket) = if len <= small_max {
            (SizeClass::Small, &mut out.small_ids)
        } else if len >= large_min {
            (SizeClass::Large, &mut out.large_ids)
        } else {
            (SizeClass::Medium, &mut out.medium_ids)
        };
        out.rank.push(bucket.len());
        bucket.push(i);
        out.class.push(class);
    }
    Ok(out)
}
