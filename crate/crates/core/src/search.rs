//! Shared pieces of the exhaustive searches: the report format, a node and
//! wall-clock budget that many workers can draw on, and worker-pool setup.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Exists,
    /// Only perfect difference sets meet the forced parameters.
    DsOnly,
    None,
    Timeout,
}

impl std::fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchStatus::Exists => "EXISTS",
            SearchStatus::DsOnly => "DS_ONLY",
            SearchStatus::None => "NONE",
            SearchStatus::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchMode {
    /// Stop at the first witness.
    Exists,
    Count,
    /// Count and keep every representative.
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub status: SearchStatus,
    pub witness: Option<Vec<u64>>,
    /// Representatives found; exact in COUNT/ALL mode, 0 or 1 in EXISTS mode.
    pub count: u64,
    pub nodes: u64,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<Vec<u64>>,
}

/// Node and time limits for one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(n: u64) -> Self {
        Self { max_nodes: Some(n), timeout: None }
    }

    pub fn seconds(s: f64) -> Self {
        Self { max_nodes: None, timeout: Some(Duration::from_secs_f64(s)) }
    }
}

/// Live budget state shared by all workers of one search.
#[derive(Debug)]
pub struct Meter {
    start: Instant,
    budget: Budget,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

const FLUSH: u64 = 1 << 12;

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Self {
            start: Instant::now(),
            budget,
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Publishes `local` pending nodes; returns false once the budget is spent.
    pub fn flush(&self, local: &mut u64) -> bool {
        let total = self.nodes.fetch_add(*local, Ordering::Relaxed) + *local;
        *local = 0;
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self.budget.timeout.is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Counts one node; checks the shared budget every few thousand.
    #[inline]
    pub fn tick(&self, local: &mut u64) -> bool {
        *local += 1;
        if *local >= FLUSH {
            return self.flush(local);
        }
        true
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// Runs `f` on a pool with `jobs` workers, or the global pool when `None`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}
