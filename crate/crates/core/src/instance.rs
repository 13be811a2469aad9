//! The set-system instance model and its line-oriented file format.
//!
//! An instance file starts with a header line `m u`, followed by exactly `m`
//! lines; line `i` lists the elements of `S_i` in strictly increasing order,
//! separated by spaces. An empty line is an empty set. Elements and set
//! indices are 1-based everywhere in the public API.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, ParseError, Result};

/// A collection `S_1..S_m` of sets over the universe `1..=u`.
///
/// Immutable after construction; every set is strictly increasing and every
/// element lies in `1..=u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe: u32,
    sets: Vec<Vec<u32>>,
    total: usize,
}

impl SetSystem {
    /// Validates and wraps already-sorted sets.
    pub fn new(universe: u32, sets: Vec<Vec<u32>>) -> Result<Self> {
        for (idx, set) in sets.iter().enumerate() {
            if let Some(&bad) = set.iter().find(|&&e| e == 0 || e > universe) {
                return Err(Error::InvalidInstance(format!(
                    "set {} holds element {bad} outside 1..={universe}",
                    idx + 1
                )));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "set {} is not strictly increasing",
                    idx + 1
                )));
            }
        }
        let total = sets.iter().map(Vec::len).sum();
        Ok(Self { universe, sets, total })
    }

    /// Sorts and deduplicates each set before validating it.
    pub fn from_unsorted(universe: u32, mut sets: Vec<Vec<u32>>) -> Result<Self> {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
        }
        Self::new(universe, sets)
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Total element count `N = Σ|S_i|`.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    /// Converts a 1-based set index into a 0-based one.
    pub fn check_index(&self, index: usize) -> Result<usize> {
        if index == 0 || index > self.sets.len() {
            Err(Error::IndexOutOfRange {
                index,
                m: self.sets.len(),
            })
        } else {
            Ok(index - 1)
        }
    }

    /// The set `S_index` (1-based).
    pub fn set(&self, index: usize) -> Result<&[u32]> {
        Ok(&self.sets[self.check_index(index)?])
    }

    pub fn max_set_len(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Renders the instance in the text file format.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.total * 4 + 16);
        let _ = writeln!(out, "{} {}", self.m(), self.universe);
        for set in &self.sets {
            let mut first = true;
            for e in set {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(ParseError::MalformedHeader { line: 1 })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ParseError::MalformedHeader { line: 1 });
        }
        let m: usize = fields[0].parse().map_err(|_| ParseError::MalformedHeader { line: 1 })?;
        let universe: u32 = fields[1].parse().map_err(|_| ParseError::MalformedHeader { line: 1 })?;

        let mut sets = Vec::with_capacity(m);
        for (offset, line) in lines.enumerate() {
            let line_no = offset + 2;
            if sets.len() == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(ParseError::SetCount {
                    expected: m,
                    found: m + 1,
                });
            }
            let mut set = Vec::new();
            for token in line.split_whitespace() {
                let value: u64 = token.parse().map_err(|_| ParseError::BadToken {
                    line: line_no,
                    token: token.to_string(),
                })?;
                if value == 0 || value > u64::from(universe) {
                    return Err(ParseError::ElementOutOfRange {
                        line: line_no,
                        element: value,
                        universe,
                    });
                }
                let value = value as u32;
                if set.last().is_some_and(|&prev| prev >= value) {
                    return Err(ParseError::Unsorted { line: line_no });
                }
                set.push(value);
            }
            sets.push(set);
        }
        if sets.len() != m {
            return Err(ParseError::SetCount {
                expected: m,
                found: sets.len(),
            });
        }
        let total = sets.iter().map(Vec::len).sum();
        Ok(Self { universe, sets, total })
    }
}

pub fn save_instance(sys: &SetSystem, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, sys.to_text())?;
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<SetSystem> {
    let text = fs::read_to_string(path)?;
    Ok(SetSystem::parse(&text)?)
}

/// Parses a query file of `i j` lines. Blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    let mut pairs = Vec::new();
    for (offset, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(ParseError::MalformedPair { line: offset + 1 });
        };
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| ParseError::BadToken {
                line: offset + 1,
                token: t.to_string(),
            })
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    Ok(pairs)
}

pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<(usize, usize)>> {
    Ok(parse_pairs(&fs::read_to_string(path)?)?)
}

/// The three-set fixture used throughout the tests: `u = 4`,
/// `S_1 = {1,2}`, `S_2 = {2,3}`, `S_3 = {4}`.
pub fn canon1() -> SetSystem {
    SetSystem::new(4, vec![vec![1, 2], vec![2, 3], vec![4]]).expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip_canon() {
        let sys = canon1();
        assert_eq!(sys.total(), 5);
        let text = sys.to_text();
        assert_eq!(text, "3 4\n1 2\n2 3\n4\n");
        assert_eq!(SetSystem::parse(&text).unwrap(), sys);
    }

    #[test]
    fn element_above_universe_is_rejected() {
        let err = SetSystem::parse("3 4\n1 2\n2 5\n4\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::ElementOutOfRange {
                line: 3,
                element: 5,
                universe: 4
            }
        ));
    }

    #[test]
    fn distinct_parse_errors() {
        assert!(matches!(
            SetSystem::parse("3\n").unwrap_err(),
            ParseError::MalformedHeader { .. }
        ));
        assert!(matches!(
            SetSystem::parse("1 4\n3 2\n").unwrap_err(),
            ParseError::Unsorted { line: 2 }
        ));
        assert!(matches!(
            SetSystem::parse("1 4\n2 2\n").unwrap_err(),
            ParseError::Unsorted { line: 2 }
        ));
        assert!(matches!(
            SetSystem::parse("1 4\nx\n").unwrap_err(),
            ParseError::BadToken { .. }
        ));
        assert!(matches!(
            SetSystem::parse("2 4\n1\n").unwrap_err(),
            ParseError::SetCount { expected: 2, found: 1 }
        ));
    }

    #[test]
    fn empty_system_and_empty_sets() {
        let sys = SetSystem::parse("0 5\n").unwrap();
        assert_eq!(sys.m(), 0);
        assert_eq!(sys.total(), 0);

        let sys = SetSystem::parse("2 3\n\n1 3\n").unwrap();
        assert_eq!(sys.sets(), &[vec![], vec![1, 3]]);
        assert_eq!(SetSystem::parse(&sys.to_text()).unwrap(), sys);
    }

    #[test]
    fn index_checks_are_one_based() {
        let sys = canon1();
        assert_eq!(sys.set(3).unwrap(), &[4]);
        assert!(matches!(sys.set(0), Err(Error::IndexOutOfRange { index: 0, m: 3 })));
        assert!(sys.set(4).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("canon.txt");
        save_instance(&canon1(), &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), canon1());
    }

    #[test]
    fn pairs_file() {
        let pairs = parse_pairs("1 2\n\n# note\n3 3\n").unwrap();
        assert_eq!(pairs, vec![(1, 2), (3, 3)]);
        assert!(parse_pairs("1 2 3\n").is_err());
    }
}
