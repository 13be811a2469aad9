//! Tradeoff sweeps: build each structure across a parameter list, run a
//! seeded query workload and summarize the cost counters as CSV rows.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::cost::CostMeter;
use crate::error::{invalid, Error, Result};
use crate::gen::{gen_heavy_tailed, rng};
use crate::index::SetIndex;
use crate::instance::SetSystem;
use crate::oracle::OracleIndex;
use crate::si::{Alg1, Alg2, Alg3, Hybrid, HybridConfig};

pub const CSV_VERSION_LINE: &str = "# setlab-bench v1";
pub const CSV_COLUMNS: &str = "structure,param,words,probes_mean,probes_p99,out_mean,queries,ms";

/// Structures a sweep can build. The parameter is `r` for the three
/// algorithms and the word budget for the hybrid; the oracle ignores it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Alg1,
    Alg2,
    Alg3,
    Hybrid,
    Oracle,
}

impl FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alg1" => Ok(Self::Alg1),
            "alg2" => Ok(Self::Alg2),
            "alg3" => Ok(Self::Alg3),
            "hybrid" => Ok(Self::Hybrid),
            "oracle" => Ok(Self::Oracle),
            other => Err(invalid(format!("unknown structure `{other}`"))),
        }
    }
}

impl std::fmt::Display for Structure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Alg1 => "alg1",
            Self::Alg2 => "alg2",
            Self::Alg3 => "alg3",
            Self::Hybrid => "hybrid",
            Self::Oracle => "oracle",
        })
    }
}

pub fn build_structure(kind: Structure, sys: &SetSystem, param: usize) -> Result<Box<dyn SetIndex>> {
    Ok(match kind {
        Structure::Alg1 => Box::new(Alg1::build(sys, param)),
        Structure::Alg2 => Box::new(Alg2::build(sys, param)?),
        Structure::Alg3 => Box::new(Alg3::build(sys, param)),
        Structure::Hybrid => Box::new(Hybrid::build(
            sys,
            &HybridConfig {
                budget: param as u64,
                ..HybridConfig::default()
            },
        )?),
        Structure::Oracle => Box::new(OracleIndex::new(sys)),
    })
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub structure: String,
    pub param: usize,
    pub words: u64,
    pub probes_mean: f64,
    pub probes_p99: u64,
    pub out_mean: f64,
    pub queries: usize,
    pub ms: u64,
}

/// Everything that determines a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub m: usize,
    pub u: u32,
    pub skew: f64,
    pub structures: Vec<Structure>,
    pub params: Vec<usize>,
    pub queries: usize,
    /// Record wall time; off by default so repeated runs match byte for byte.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            m: 1160,
            u: 2048,
            skew: 1.5,
            structures: vec![Structure::Alg1, Structure::Alg3],
            params: (1..=8).map(|k| 1 << k).collect(),
            queries: 1000,
            timing: false,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| invalid(format!("bad `{key}` entry `{s}`")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| invalid(format!("bad value `{value}` for `{key}`")))
}

/// Splits `key=value` lines, skipping blanks and `#` comments.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| {
            l.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| invalid(format!("config line {}: expected key=value", n + 1)))
        })
        .collect()
}

impl RunConfig {
    /// Applies `key=value` lines over the defaults. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (k, v) in parse_key_values(text)? {
            c.set(&k, &v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "seed" => self.seed = parse_one(key, value)?,
            "m" => self.m = parse_one(key, value)?,
            "u" => self.u = parse_one(key, value)?,
            "skew" => self.skew = parse_one(key, value)?,
            "structures" => self.structures = parse_list(key, value)?,
            "params" => self.params = parse_list(key, value)?,
            "queries" => self.queries = parse_one(key, value)?,
            "timing" => self.timing = parse_one(key, value)?,
            other => return Err(invalid(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.u == 0 {
            return Err(invalid("m and u must be positive"));
        }
        if self.structures.is_empty() || self.params.is_empty() {
            return Err(invalid("structures and params must be non-empty"));
        }
        Ok(())
    }

    pub fn instance(&self) -> Result<SetSystem> {
        gen_heavy_tailed(self.m, self.u, self.skew, self.seed)
    }
}

/// `count` uniformly random 1-based pairs.
pub fn query_workload(m: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    if m == 0 {
        return Vec::new();
    }
    let mut r = rng(seed);
    (0..count).map(|_| (r.gen_range(1..=m), r.gen_range(1..=m))).collect()
}

/// Runs the workload on a worker pool; each query owns its meter, and the
/// results come back in workload order.
pub fn measure(index: &dyn SetIndex, workload: &[(usize, usize)]) -> Result<Vec<(u64, usize)>> {
    workload
        .par_iter()
        .map(|&(i, j)| {
            let mut meter = CostMeter::default();
            let r = index.query(i, j, &mut meter)?;
            Ok((meter.probes, r.out()))
        })
        .collect()
}

/// Smallest value with at least 99% of the samples at or below it.
pub fn p99(values: &[u64]) -> u64 {
    if values.is_empty() {
        return 0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let rank = (values.len() * 99).div_ceil(100).max(1);
    v[rank - 1]
}

pub fn bench_one(
    kind: Structure,
    sys: &SetSystem,
    param: usize,
    workload: &[(usize, usize)],
    timing: bool,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let index = build_structure(kind, sys, param)?;
    let samples = measure(index.as_ref(), workload)?;
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let q = samples.len().max(1) as f64;
    let probes: Vec<u64> = samples.iter().map(|s| s.0).collect();
    Ok(BenchRecord {
        structure: kind.to_string(),
        param,
        words: index.words(),
        probes_mean: probes.iter().sum::<u64>() as f64 / q,
        probes_p99: p99(&probes),
        out_mean: samples.iter().map(|s| s.1).sum::<usize>() as f64 / q,
        queries: samples.len(),
        ms,
    })
}

pub fn run_bench(sys: &SetSystem, config: &RunConfig) -> Result<Vec<BenchRecord>> {
    let workload = query_workload(sys.m(), config.queries, config.seed.wrapping_add(1));
    let mut out = Vec::new();
    for &kind in &config.structures {
        for &param in &config.params {
            out.push(bench_one(kind, sys, param, &workload, config.timing)?);
        }
    }
    Ok(out)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = format!("{CSV_VERSION_LINE}\n{CSV_COLUMNS}\n");
    for r in records {
        writeln!(
            s,
            "{},{},{},{:.3},{},{:.3},{},{}",
            r.structure, r.param, r.words, r.probes_mean, r.probes_p99, r.out_mean, r.queries, r.ms
        )
        .expect("writing to a String");
    }
    s
}

/// Least-squares slope of `ln y` against `ln x`; points with `y <= 0` are
/// rejected.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(invalid("slope needs at least two points"));
    }
    if let Some(p) = points.iter().find(|p| p.0 <= 0.0 || p.1 <= 0.0) {
        return Err(invalid(format!("non-positive point ({}, {})", p.0, p.1)));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
