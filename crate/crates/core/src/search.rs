//! Budget accounting and deterministic parallel backtracking shared by the
//! exhaustive searches.
//!
//! A search tree is split at its root into numbered branches. Branches run
//! in parallel, but the merged answer is always the success of the
//! lowest-numbered branch, so results do not depend on the worker count.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Limits for one search. A limit of `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_candidates: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_candidates: Some(5_000_000_000),
            max_seconds: None,
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_candidates: None,
            max_seconds: None,
        }
    }

    pub fn candidates(n: u64) -> Self {
        SearchBudget {
            max_candidates: Some(n),
            max_seconds: None,
        }
    }
}

/// Options shared by the searches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl SearchOptions {
    pub fn with_budget(budget: SearchBudget) -> Self {
        SearchOptions {
            budget,
            threads: None,
        }
    }
}

/// Shared node counter and stop flag for one search.
pub struct Meter {
    visited: AtomicU64,
    limit: u64,
    deadline: Option<Instant>,
    stopped: AtomicBool,
    batch: u64,
}

impl Meter {
    pub fn new(budget: &SearchBudget) -> Meter {
        let limit = budget.max_candidates.unwrap_or(u64::MAX);
        Meter {
            visited: AtomicU64::new(0),
            limit,
            // Small budgets are enforced exactly; large ones in batches.
            batch: (limit / 4096).clamp(1, 256),
            deadline: budget
                .max_seconds
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            stopped: AtomicBool::new(false),
        }
    }

    pub fn visited(&self) -> u64 {
        self.visited.load(Ordering::Relaxed)
    }

    pub fn stopped(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }

    fn add(&self, n: u64) -> bool {
        let total = self.visited.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.limit || self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stopped.store(true, Ordering::Relaxed);
        }
        !self.stopped()
    }

    pub fn ticker(&self) -> Ticker<'_> {
        Ticker {
            meter: self,
            pending: 0,
        }
    }
}

/// Per-worker view of a [`Meter`] that batches counter updates.
pub struct Ticker<'a> {
    meter: &'a Meter,
    pending: u64,
}

impl Ticker<'_> {
    /// Counts one visited node. Returns false once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= self.meter.batch {
            let n = std::mem::take(&mut self.pending);
            self.meter.add(n)
        } else {
            true
        }
    }

    pub fn flush(&mut self) {
        let n = std::mem::take(&mut self.pending);
        if n > 0 {
            self.meter.add(n);
        }
    }
}

impl Drop for Ticker<'_> {
    fn drop(&mut self) {
        let n = std::mem::take(&mut self.pending);
        self.meter.visited.fetch_add(n, Ordering::Relaxed);
    }
}

/// Result of one branch or of a whole search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    /// The branch was searched completely without success.
    Exhausted,
    /// The branch stopped early (budget spent or a lower branch succeeded).
    Aborted,
}

/// Cancellation view handed to a branch.
pub struct BranchCtx<'a> {
    index: usize,
    best: &'a AtomicUsize,
    meter: &'a Meter,
}

impl BranchCtx<'_> {
    /// True when the branch should stop: the budget is spent or a
    /// lower-numbered branch already succeeded.
    #[inline]
    pub fn cancelled(&self) -> bool {
        self.meter.stopped() || self.best.load(Ordering::Relaxed) < self.index
    }

    pub fn meter(&self) -> &Meter {
        self.meter
    }
}

/// Runs `branches` root branches and returns the success of the
/// lowest-numbered successful branch. The whole search counts as exhausted
/// only when every branch is exhausted.
pub fn first_success<T, F>(branches: usize, threads: Option<usize>, meter: &Meter, f: F) -> Outcome<T>
where
    T: Send,
    F: Fn(usize, &BranchCtx<'_>) -> Outcome<T> + Sync,
{
    let best = AtomicUsize::new(usize::MAX);
    let run = || -> Vec<Outcome<T>> {
        (0..branches)
            .into_par_iter()
            .map(|i| {
                let ctx = BranchCtx {
                    index: i,
                    best: &best,
                    meter,
                };
                if ctx.cancelled() {
                    return Outcome::Aborted;
                }
                let r = f(i, &ctx);
                if matches!(r, Outcome::Found(_)) {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                r
            })
            .collect()
    };
    let results = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    for r in results {
        match r {
            Outcome::Exhausted => continue,
            other => return other,
        }
    }
    Outcome::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_branch_wins_regardless_of_threads() {
        for threads in [Some(1), Some(4), None] {
            let meter = Meter::new(&SearchBudget::unlimited());
            let r = first_success(20, threads, &meter, |i, _| {
                if i % 7 == 3 {
                    Outcome::Found(i)
                } else {
                    Outcome::Exhausted
                }
            });
            assert_eq!(r, Outcome::Found(3));
        }
    }

    #[test]
    fn all_exhausted_and_budget() {
        let meter = Meter::new(&SearchBudget::unlimited());
        let r: Outcome<()> = first_success(5, Some(2), &meter, |_, _| Outcome::Exhausted);
        assert_eq!(r, Outcome::Exhausted);

        let meter = Meter::new(&SearchBudget::candidates(10));
        let mut t = meter.ticker();
        let mut ok = true;
        for _ in 0..1000 {
            ok = t.tick();
            if !ok {
                break;
            }
        }
        assert!(!ok);
        drop(t);
        assert!(meter.visited() > 10);
    }
}
