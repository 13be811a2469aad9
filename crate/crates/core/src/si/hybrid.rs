use std::fmt;

use crate::cost::CostMeter;
use crate::error::{invalid, Error, Result};
use crate::index::{SetIndex, SetStore};
use crate::instance::SetSystem;
use crate::oracle::{intersect_sorted, QueryResult};
use crate::si::{Alg1, Alg2, Alg3, SdCount};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReporterKind {
    #[default]
    Alg1,
    Alg2,
    Alg3,
}

impl std::str::FromStr for ReporterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "alg1" => Ok(Self::Alg1),
            "2" | "alg2" => Ok(Self::Alg2),
            "3" | "alg3" => Ok(Self::Alg3),
            other => Err(invalid(format!("unknown reporter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct HybridConfig {
    /// Space budget in words for each sub-structure.
    pub budget: u64,
    pub reporter: ReporterKind,
    /// Overrides the output-size threshold that selects the small-out path.
    pub threshold: Option<f64>,
}

/// Which path served a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HybridPath {
    Empty,
    SmallOut,
    Reporter,
}

impl fmt::Display for HybridPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Empty => "empty",
            Self::SmallOut => "small-out",
            Self::Reporter => "reporter",
        })
    }
}

/// Sizes the intersection first, then routes the query: nothing to do for an
/// empty intersection, a direct merge for small outputs and the budgeted
/// reporting structure otherwise.
pub struct Hybrid {
    budget: u64,
    sizer: SdCount,
    reporter: Box<dyn SetIndex>,
    reporter_param: usize,
    store: SetStore,
    threshold: f64,
}

impl fmt::Debug for Hybrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hybrid")
            .field("budget", &self.budget)
            .field("sizer_threshold", &self.sizer.threshold())
            .field("reporter", &self.reporter.name())
            .field("reporter_param", &self.reporter_param)
            .field("threshold", &self.threshold)
            .finish()
    }
}

/// Descending candidate parameters: `max+1, ..., 4, 2, 1, 0`.
fn candidates(max_len: usize, min: usize) -> Vec<usize> {
    let mut out = vec![max_len + 1];
    let mut p = (max_len + 1).next_power_of_two() / 2;
    while p >= 1 {
        if p < max_len + 1 {
            out.push(p);
        }
        p /= 2;
    }
    out.push(0);
    out.retain(|&c| c >= min);
    out.dedup();
    out
}

/// Walks parameters from cheapest to most expensive and keeps the last one
/// whose structure still fits the budget.
fn fit<T>(
    cands: &[usize],
    budget: u64,
    build: impl Fn(usize) -> Result<T>,
    words: impl Fn(&T) -> u64,
) -> Result<(usize, T)> {
    let mut best = None;
    for &c in cands {
        let st = build(c)?;
        if words(&st) > budget {
            break;
        }
        best = Some((c, st));
    }
    best.ok_or_else(|| invalid("no parameter fits the budget"))
}

impl Hybrid {
    pub fn build(sys: &SetSystem, config: &HybridConfig) -> Result<Self> {
        let store = SetStore::new(sys);
        let required = store.words();
        if config.budget < required {
            return Err(Error::BudgetTooSmall {
                budget: config.budget,
                required,
            });
        }
        let max_len = sys.max_set_len();
        let (_, sizer) = fit(
            &candidates(max_len, 0),
            config.budget,
            |t| Ok(SdCount::build(sys, t)),
            SdCount::words,
        )?;
        let (reporter_param, reporter): (usize, Box<dyn SetIndex>) = match config.reporter {
            ReporterKind::Alg1 => {
                let (r, st) = fit(
                    &candidates(max_len, 0),
                    config.budget,
                    |r| Ok(Alg1::build(sys, r)),
                    |s| s.words(),
                )?;
                (r, Box::new(st))
            }
            ReporterKind::Alg2 => {
                let (r, st) = fit(
                    &candidates(max_len, 1),
                    config.budget,
                    |r| Alg2::build(sys, r),
                    |s| s.words(),
                )?;
                (r, Box::new(st))
            }
            ReporterKind::Alg3 => {
                let (r, st) = fit(
                    &candidates(max_len, 0),
                    config.budget,
                    |r| Ok(Alg3::build(sys, r)),
                    |s| s.words(),
                )?;
                (r, Box::new(st))
            }
        };
        let threshold = match config.threshold {
            Some(t) if t.is_finite() && t >= 0.0 => t,
            Some(t) => return Err(invalid(format!("threshold {t} must be a non-negative number"))),
            None => default_threshold(sys.total(), config.budget),
        };
        Ok(Self {
            budget: config.budget,
            sizer,
            reporter,
            reporter_param,
            store,
            threshold,
        })
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn sizer(&self) -> &SdCount {
        &self.sizer
    }

    pub fn reporter_name(&self) -> &str {
        self.reporter.name()
    }

    pub fn reporter_param(&self) -> usize {
        self.reporter_param
    }

    /// The path the dispatcher picks for an intersection of size `size`.
    pub fn route(&self, size: usize) -> HybridPath {
        if size == 0 {
            HybridPath::Empty
        } else if (size as f64) < self.threshold {
            HybridPath::SmallOut
        } else {
            HybridPath::Reporter
        }
    }

    pub fn query_traced(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<(QueryResult, HybridPath)> {
        let size = self.sizer.count(i, j, meter)?;
        let path = self.route(size);
        let sizing = *meter;
        let result = self.serve(path, i, j, meter)?;
        meter.probes += sizing.probes;
        Ok((result, path))
    }

    /// Serves the query along `path` regardless of the dispatcher's choice.
    pub fn query_via(&self, path: HybridPath, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        meter.begin_query();
        self.serve(path, i, j, meter)
    }

    fn serve(&self, path: HybridPath, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        let (i0, j0) = (self.store.index(i)?, self.store.index(j)?);
        match path {
            HybridPath::Empty => {
                meter.begin_query();
                Ok(QueryResult::empty())
            }
            HybridPath::SmallOut => {
                meter.begin_query();
                let (a, b) = (self.store.set(i0), self.store.set(j0));
                meter.probe((a.len() + b.len()) as u64);
                Ok(QueryResult::new(intersect_sorted(a, b)))
            }
            HybridPath::Reporter => {
                let mut inner = CostMeter::default();
                let result = self.reporter.query(i, j, &mut inner)?;
                meter.begin_query();
                meter.absorb_inner(&inner);
                Ok(result)
            }
        }
    }
}

/// `N^{t/(1-t)}` with `t = 1 - log_N(budget)/2` clamped to `[0, 1/2]`.
pub fn default_threshold(total: usize, budget: u64) -> f64 {
    if total < 2 {
        return 1.0;
    }
    let n = total as f64;
    let t = (1.0 - (budget.max(1) as f64).ln() / n.ln() / 2.0).clamp(0.0, 0.5);
    n.powf(t / (1.0 - t))
}

impl SetIndex for Hybrid {
    fn name(&self) -> &str {
        "hybrid"
    }

    fn m(&self) -> usize {
        self.store.m()
    }

    /// The two sub-structures share one copy of the sets and tables.
    fn words(&self) -> u64 {
        let shared = self.store.words();
        self.sizer.words() + SetIndex::words(self.reporter.as_ref()) - shared
    }

    fn query(&self, i: usize, j: usize, meter: &mut CostMeter) -> Result<QueryResult> {
        Ok(self.query_traced(i, j, meter)?.0)
    }
}
