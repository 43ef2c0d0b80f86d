//! Exhaustive backtracking search for untouchable sets of a given size.
//!
//! Subsets are grown in increasing canonical index order. The collineation
//! group is transitive on points, so every nonempty untouchable set has an
//! image containing point 0; the search fixes point 0 and nothing else.
//! A completed search without a witness proves non-existence for that
//! plane and size. Running out of budget only ever yields
//! [`SearchStatus::Inconclusive`].
//!
//! Pruning at each node, with `r` points still to place and every future
//! point above the current frontier:
//! - a line meeting the partial set once with no point above the frontier
//!   can never be repaired;
//! - the lines through a chosen point `P` that meet the set only in `P`
//!   pairwise share no other point, so they need that many distinct new
//!   points, which must not exceed `r`.

use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conics::contains_conic;
use crate::plane::{Plane, PointSet};

/// Witnesses in planes up to this order get the conic-containment flag.
pub const CONIC_CHECK_MAX_ORDER: u32 = 9;

const TIME_CHECK_INTERVAL: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("size {size} exceeds the {points} points of the plane")]
    SizeTooLarge { size: usize, points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 1_000_000_000, max_time: Duration::from_secs(600) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Budget,
    /// Split the tree below the second chosen point across threads.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: Budget::default(), parallel: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    /// A witness was found.
    Found,
    /// The whole tree was explored without a witness.
    Exhausted,
    /// The budget ran out first; nothing is claimed.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetLimit {
    Nodes,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub size: usize,
    pub witness: Option<PointSet>,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub limit: Option<BudgetLimit>,
    /// Whether the witness contains a whole conic; reported only, and only
    /// for small planes.
    pub witness_contains_conic: Option<bool>,
}

impl SearchOutcome {
    /// `Some(true)` / `Some(false)` when settled, `None` when inconclusive.
    pub fn exists(&self) -> Option<bool> {
        match self.status {
            SearchStatus::Found => Some(true),
            SearchStatus::Exhausted => Some(false),
            SearchStatus::Inconclusive => None,
        }
    }
}

enum Flow {
    Continue,
    Found,
    NodeCap,
    Stopped,
}

struct Shared {
    start: Instant,
    max_time: Duration,
    timed_out: AtomicBool,
    /// Smallest second-point index whose subtree holds a witness.
    best_found: AtomicU32,
}

struct Subtree<'a> {
    plane: &'a Plane,
    n: u32,
    size: usize,
    line_max: &'a [u32],
    counts: Vec<u16>,
    sums: Vec<u32>,
    tally: Vec<u16>,
    chosen: Vec<u32>,
    nodes: u64,
    cap: u64,
    shared: &'a Shared,
    branch: u32,
}

impl<'a> Subtree<'a> {
    fn new(plane: &'a Plane, size: usize, line_max: &'a [u32], cap: u64, shared: &'a Shared, branch: u32) -> Self {
        let n = plane.num_points();
        Subtree {
            plane,
            n: n as u32,
            size,
            line_max,
            counts: vec![0; n],
            sums: vec![0; n],
            tally: vec![0; n],
            chosen: Vec::with_capacity(size),
            nodes: 0,
            cap,
            shared,
            branch,
        }
    }

    #[inline]
    fn push(&mut self, p: u32) {
        for &l in self.plane.lines_through(p) {
            self.counts[l as usize] += 1;
            self.sums[l as usize] += p;
        }
        self.chosen.push(p);
    }

    #[inline]
    fn pop(&mut self) {
        let p = self.chosen.pop().expect("nonempty");
        for &l in self.plane.lines_through(p) {
            self.counts[l as usize] -= 1;
            self.sums[l as usize] -= p;
        }
    }

    /// Can the partial set still be completed with `r` points above `last`?
    fn feasible(&mut self, last: u32, r: usize) -> bool {
        if (self.n - 1 - last) < r as u32 {
            return false;
        }
        let mut ok = true;
        for l in 0..self.n as usize {
            if self.counts[l] != 1 {
                continue;
            }
            if r == 0 || self.line_max[l] <= last {
                ok = false;
                break;
            }
            let p = self.sums[l] as usize;
            self.tally[p] += 1;
            if self.tally[p] as usize > r {
                ok = false;
                break;
            }
        }
        for &p in &self.chosen {
            self.tally[p as usize] = 0;
        }
        ok
    }

    fn dfs(&mut self, last: u32) -> Flow {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Flow::NodeCap;
        }
        if self.nodes.is_multiple_of(TIME_CHECK_INTERVAL) {
            let sh = self.shared;
            if sh.best_found.load(Ordering::Relaxed) < self.branch || sh.timed_out.load(Ordering::Relaxed) {
                return Flow::Stopped;
            }
            if sh.start.elapsed() > sh.max_time {
                sh.timed_out.store(true, Ordering::Relaxed);
                return Flow::Stopped;
            }
        }
        let r = self.size - self.chosen.len();
        if !self.feasible(last, r) {
            return Flow::Continue;
        }
        if r == 0 {
            return Flow::Found;
        }
        for next in last + 1..=self.n - r as u32 {
            self.push(next);
            match self.dfs(next) {
                Flow::Continue => self.pop(),
                other => return other,
            }
        }
        Flow::Continue
    }
}

enum SubResult {
    Found(Vec<u32>),
    Exhausted,
    NodeCap,
    Stopped,
}

fn run_branch(
    plane: &Plane,
    size: usize,
    line_max: &[u32],
    cap: u64,
    shared: &Shared,
    second: u32,
) -> (u64, SubResult) {
    let mut t = Subtree::new(plane, size, line_max, cap, shared, second);
    t.push(0);
    t.push(second);
    let res = match t.dfs(second) {
        Flow::Found => {
            shared.best_found.fetch_min(second, Ordering::Relaxed);
            SubResult::Found(t.chosen.clone())
        }
        Flow::Continue => SubResult::Exhausted,
        Flow::NodeCap => SubResult::NodeCap,
        Flow::Stopped => SubResult::Stopped,
    };
    (t.nodes, res)
}

/// Decides whether an untouchable set of exactly `size` points exists.
///
/// Node counts and outcomes are deterministic for a fixed node budget and
/// do not depend on `parallel`; a time limit can only turn a result into
/// `Inconclusive`.
pub fn exhaustive_exists(
    plane: &Plane,
    size: usize,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let n = plane.num_points();
    if size > n {
        return Err(SearchError::SizeTooLarge { size, points: n });
    }
    let start = Instant::now();
    let max_nodes = options.budget.max_nodes;
    let mut outcome = SearchOutcome {
        status: SearchStatus::Exhausted,
        size,
        witness: None,
        nodes_explored: 0,
        wall_time: Duration::ZERO,
        limit: None,
        witness_contains_conic: None,
    };
    let finish = |mut o: SearchOutcome| {
        o.wall_time = start.elapsed();
        if let Some(w) = &o.witness {
            if plane.order() <= CONIC_CHECK_MAX_ORDER {
                o.witness_contains_conic = Some(contains_conic(plane, w));
            }
        }
        Ok(o)
    };
    if size == 0 {
        outcome.status = SearchStatus::Found;
        outcome.witness = Some(plane.empty_set());
        return finish(outcome);
    }

    let line_max: Vec<u32> =
        (0..n as u32).map(|l| *plane.points_on_line(l).last().expect("nonempty line")).collect();
    let shared = Shared {
        start,
        max_time: options.budget.max_time,
        timed_out: AtomicBool::new(false),
        best_found: AtomicU32::new(u32::MAX),
    };

    // Root: point 0 alone.
    let mut root = Subtree::new(plane, size, &line_max, max_nodes, &shared, 0);
    root.push(0);
    outcome.nodes_explored = 1;
    if max_nodes == 0 {
        outcome.status = SearchStatus::Inconclusive;
        outcome.limit = Some(BudgetLimit::Nodes);
        outcome.nodes_explored = 0;
        return finish(outcome);
    }
    if !root.feasible(0, size - 1) {
        return finish(outcome);
    }
    if size == 1 {
        outcome.status = SearchStatus::Found;
        outcome.witness = Some(plane.point_set([0]).expect("point 0"));
        return finish(outcome);
    }

    let seconds: Vec<u32> = (1..=(n - (size - 1)) as u32).collect();
    let mut total: u64 = 1;
    let settle = |total: &mut u64, nodes: u64, res: SubResult, outcome: &mut SearchOutcome| -> bool {
        *total = total.saturating_add(nodes);
        let total = *total;
        match res {
            SubResult::Stopped => {
                outcome.status = SearchStatus::Inconclusive;
                outcome.limit = Some(BudgetLimit::Time);
                outcome.nodes_explored = total;
                true
            }
            _ if total > max_nodes => {
                outcome.status = SearchStatus::Inconclusive;
                outcome.limit = Some(BudgetLimit::Nodes);
                outcome.nodes_explored = max_nodes;
                true
            }
            SubResult::NodeCap => unreachable!("a capped subtree exceeds the total budget"),
            SubResult::Found(pts) => {
                outcome.status = SearchStatus::Found;
                outcome.witness = Some(plane.point_set(pts).expect("valid indices"));
                outcome.nodes_explored = total;
                true
            }
            SubResult::Exhausted => {
                outcome.nodes_explored = total;
                false
            }
        }
    };

    if options.parallel {
        let results: Vec<(u64, SubResult)> = seconds
            .par_iter()
            .map(|&j| {
                if shared.best_found.load(Ordering::Relaxed) < j {
                    return (0, SubResult::Stopped);
                }
                run_branch(plane, size, &line_max, max_nodes, &shared, j)
            })
            .collect();
        for (nodes, res) in results {
            if settle(&mut total, nodes, res, &mut outcome) {
                break;
            }
        }
    } else {
        for &j in &seconds {
            let remaining = max_nodes.saturating_sub(total);
            let (nodes, res) = run_branch(plane, size, &line_max, remaining, &shared, j);
            if settle(&mut total, nodes, res, &mut outcome) {
                break;
            }
        }
    }
    finish(outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinSize {
    Found { size: usize, witness: PointSet },
    /// No nonempty untouchable set of size up to the bound.
    NoneUpTo(usize),
    /// Sizes below `proven_absent_below` were settled; this size was not.
    Inconclusive { proven_absent_below: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSizeOutcome {
    pub result: MinSize,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Smallest nonempty untouchable set with at most `upper` points.
/// Each size is searched with the full budget.
pub fn min_untouchable_size(
    plane: &Plane,
    upper: usize,
    options: &SearchOptions,
) -> Result<MinSizeOutcome, SearchError> {
    let start = Instant::now();
    let mut nodes = 0u64;
    let n = plane.num_points();
    if upper > n {
        return Err(SearchError::SizeTooLarge { size: upper, points: n });
    }
    for size in 1..=upper {
        let o = exhaustive_exists(plane, size, options)?;
        nodes += o.nodes_explored;
        let result = match o.status {
            SearchStatus::Exhausted => continue,
            SearchStatus::Found => {
                MinSize::Found { size, witness: o.witness.expect("found implies witness") }
            }
            SearchStatus::Inconclusive => MinSize::Inconclusive { proven_absent_below: size },
        };
        return Ok(MinSizeOutcome { result, nodes_explored: nodes, wall_time: start.elapsed() });
    }
    Ok(MinSizeOutcome { result: MinSize::NoneUpTo(upper), nodes_explored: nodes, wall_time: start.elapsed() })
}
