//! Pruned enumeration of rotation systems of `K_n` whose faces are the
//! hexagon `1 2 3 4 5 6` (six distinct vertices) plus triangles only.
//!
//! Rows `1..=6` are filled depth-first. Each row starts with `hex_prev(i)` and
//! ends with `hex_next(i)`; its second entry is forced to the second-to-last
//! entry of the previous row (both sides of the edge `i -> i-1` lie on one
//! triangle), and row 6's second-to-last entry is forced by row 1 the same
//! way. In row 1 the residual vertices `7..=n` appear in increasing order.
//! Every full row passes three checks in order, each counted:
//!
//! 1. no ordered pair appears in two rows (or on the hexagon),
//! 2. at most `max_triangles` triangles are mentioned,
//! 3. no edge lies on more than two mentioned faces.
//!
//! Survivors of row 6 are completed by [`complete_residual`].

mod complete;
mod state;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rotation::{hex_next, hex_prev, RotationSystem, HEXAGON_LEN};

pub use complete::complete_residual;
pub use state::{Check, PartialState, Rejection, MAX_SEARCH_N};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("completion needs all six hexagon rows, only {0} filled")]
    NotReady(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// First-row candidates are processed in fixed-size chunks so that limited
/// and cancelled runs stop at the same place regardless of worker count.
const CHUNK: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub target_genus: i64,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    pub limit: Option<usize>,
}

impl SearchConfig {
    pub fn new(n: usize, target_genus: i64) -> Result<Self, SearchError> {
        if !(HEXAGON_LEN as usize..=MAX_SEARCH_N).contains(&n) {
            return Err(SearchError::Config(format!(
                "n must be in {}..={MAX_SEARCH_N}, got {n}",
                HEXAGON_LEN
            )));
        }
        if target_genus < 0 {
            return Err(SearchError::Config("genus must be non-negative".into()));
        }
        let cfg = SearchConfig {
            n,
            target_genus,
            jobs: 1,
            limit: None,
        };
        if cfg.face_count() < 1 {
            return Err(SearchError::Config(format!(
                "K{n} on genus {target_genus} has {} faces; no room for a hexagon",
                cfg.face_count()
            )));
        }
        Ok(cfg)
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_limit(mut self, limit: Option<usize>) -> Self {
        self.limit = limit;
        self
    }

    /// `F = 2 - 2g - n + C(n, 2)`.
    pub fn face_count(&self) -> i64 {
        let n = self.n as i64;
        2 - 2 * self.target_genus - n + n * (n - 1) / 2
    }

    /// Triangles accompanying the hexagon: `F - 1`.
    pub fn max_triangles(&self) -> usize {
        (self.face_count() - 1).max(0) as usize
    }

    pub fn residual(&self) -> std::ops::RangeInclusive<u8> {
        HEXAGON_LEN + 1..=self.n as u8
    }
}

/// A cancellation flag shared with a running search.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub fn flag(&self) -> Arc<AtomicBool> {
        self.0.clone()
    }
}

/// Full rows passing each check, in check order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCounters {
    pub row: u8,
    pub opposite: u64,
    pub faces: u64,
    pub edges: u64,
}

/// Row-6 survivors grouped by the number of triangles they mention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionCounters {
    pub states: u64,
    pub completed_states: u64,
    pub sequences: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounters {
    pub first_row_candidates: u64,
    pub rows: Vec<RowCounters>,
    /// Keyed by the number of triangles mentioned in rows `1..=6`.
    pub completions: BTreeMap<usize, CompletionCounters>,
}

impl Default for StageCounters {
    fn default() -> Self {
        Self::new()
    }
}

impl StageCounters {
    pub fn new() -> Self {
        StageCounters {
            first_row_candidates: 0,
            rows: (1..=HEXAGON_LEN)
                .map(|row| RowCounters {
                    row,
                    ..Default::default()
                })
                .collect(),
            completions: BTreeMap::new(),
        }
    }

    pub fn merge(&mut self, other: &StageCounters) {
        self.first_row_candidates += other.first_row_candidates;
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.opposite += b.opposite;
            a.faces += b.faces;
            a.edges += b.edges;
        }
        for (k, b) in &other.completions {
            let a = self.completions.entry(*k).or_default();
            a.states += b.states;
            a.completed_states += b.completed_states;
            a.sequences += b.sequences;
        }
    }

    pub fn completion(&self, mentioned: usize) -> CompletionCounters {
        self.completions
            .get(&mentioned)
            .copied()
            .unwrap_or_default()
    }

    /// Passing counts never increase along a row's check chain.
    pub fn is_monotone(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.opposite >= r.faces && r.faces >= r.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub target_genus: i64,
    pub max_triangles: usize,
    /// Found systems, sorted lexicographically by rows.
    pub sequences: Vec<RotationSystem>,
    pub counters: StageCounters,
    /// False when the run was cut short by a limit or cancellation.
    pub complete: bool,
}

impl SearchResult {
    /// Sequences whose rows `1..=6` mention `max_triangles - k` triangles.
    pub fn sequences_missing(&self, k: usize) -> u64 {
        self.max_triangles
            .checked_sub(k)
            .map_or(0, |m| self.counters.completion(m).sequences)
    }
}

/// Row-1 fillings `(6, ..., 2)` with residual vertices in increasing order.
pub fn first_row_candidates(cfg: &SearchConfig) -> Vec<Vec<u8>> {
    let n = cfg.n as u8;
    let (first, last) = (hex_prev(1), hex_next(1));
    let free: Vec<u8> = (1..=n)
        .filter(|&x| x != 1 && x != first && x != last)
        .collect();
    let mut out = Vec::new();
    let mut row = vec![first];
    fn rec(
        n: u8,
        free: &[u8],
        used: &mut Vec<bool>,
        row: &mut Vec<u8>,
        last: u8,
        out: &mut Vec<Vec<u8>>,
    ) {
        if row.len() == n as usize - 2 {
            let mut full = row.clone();
            full.push(last);
            out.push(full);
            return;
        }
        // The smallest unused residual vertex is the only residual allowed.
        let next_residual = free
            .iter()
            .copied()
            .find(|&x| x > HEXAGON_LEN && !used[x as usize]);
        for &x in free {
            if used[x as usize] || (x > HEXAGON_LEN && Some(x) != next_residual) {
                continue;
            }
            used[x as usize] = true;
            row.push(x);
            rec(n, free, used, row, last, out);
            row.pop();
            used[x as usize] = false;
        }
    }
    let mut used = vec![false; n as usize + 1];
    rec(n, &free, &mut used, &mut row, last, &mut out);
    out
}

struct Searcher<'a> {
    st: PartialState,
    found: Vec<RotationSystem>,
    cancel: Option<&'a AtomicBool>,
    cancelled: bool,
}

impl Searcher<'_> {
    fn start_row(&mut self, i: u8) -> Result<(), SearchError> {
        if self.cancelled || self.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            self.cancelled = true;
            return Ok(());
        }
        let n = self.st.n as usize;
        let (prev, next) = (hex_prev(i), hex_next(i));
        let mut forced = [0u8; state::DIM];
        forced[1] = self.st.rows[i as usize - 1][n - 3];
        forced[n - 2] = next;
        if i == HEXAGON_LEN {
            forced[n - 3] = self.st.rows[1][1];
        }
        let mut used: u32 = (1 << i) | (1 << prev);
        for &f in &forced[1..n - 1] {
            if f == 0 {
                continue;
            }
            if used & (1 << f) != 0 {
                return Ok(());
            }
            used |= 1 << f;
        }
        self.st.rows[i as usize][0] = prev;
        self.fill(i, 1, used, &forced)
    }

    fn fill(
        &mut self,
        i: u8,
        k: usize,
        used: u32,
        forced: &[u8; state::DIM],
    ) -> Result<(), SearchError> {
        let n = self.st.n as usize;
        if k == n - 1 {
            if self.st.row_checks(i).is_none() {
                self.st.filled = i;
                if i == HEXAGON_LEN {
                    self.complete()?;
                } else {
                    self.start_row(i + 1)?;
                }
                self.st.filled = i - 1;
            }
            return Ok(());
        }
        let prev = self.st.rows[i as usize][k - 1];
        if forced[k] != 0 {
            let x = forced[k];
            if self.st.push_pair(i, prev, x) {
                self.st.rows[i as usize][k] = x;
                self.fill(i, k + 1, used, forced)?;
                self.st.pop_pair(i, prev, x);
            }
            return Ok(());
        }
        for x in 1..=self.st.n {
            if used & (1 << x) != 0 || !self.st.push_pair(i, prev, x) {
                continue;
            }
            self.st.rows[i as usize][k] = x;
            self.fill(i, k + 1, used | (1 << x), forced)?;
            self.st.pop_pair(i, prev, x);
        }
        Ok(())
    }

    fn complete(&mut self) -> Result<(), SearchError> {
        let mentioned = self.st.triangle_count();
        let systems = complete_residual(&self.st)?;
        let c = self.st.counters.completions.entry(mentioned).or_default();
        c.states += 1;
        if !systems.is_empty() {
            c.completed_states += 1;
            c.sequences += systems.len() as u64;
        }
        self.found.extend(systems);
        Ok(())
    }
}

struct CandidateOutcome {
    counters: StageCounters,
    found: Vec<RotationSystem>,
    cancelled: bool,
}

fn run_candidate(
    cfg: &SearchConfig,
    row1: &[u8],
    cancel: Option<&AtomicBool>,
) -> Result<CandidateOutcome, SearchError> {
    let mut searcher = Searcher {
        st: PartialState::new(cfg),
        found: Vec::new(),
        cancel,
        cancelled: false,
    };
    searcher.st.counters.first_row_candidates += 1;
    if searcher.st.extend_row(row1).is_ok() {
        searcher.start_row(2)?;
    }
    Ok(CandidateOutcome {
        counters: searcher.st.counters,
        found: searcher.found,
        cancelled: searcher.cancelled,
    })
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    run_search_with(cfg, None)
}

/// Runs the search, stopping early on `cfg.limit` or when `cancel` fires.
///
/// Work is split by first-row candidate; results are merged in candidate
/// order, so output does not depend on the number of workers.
pub fn run_search_with(
    cfg: &SearchConfig,
    cancel: Option<&CancelToken>,
) -> Result<SearchResult, SearchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| SearchError::Config(e.to_string()))?;
    let candidates = first_row_candidates(cfg);
    let flag = cancel.map(CancelToken::flag);
    let mut counters = StageCounters::new();
    let mut found = Vec::new();
    let mut complete = true;
    for (chunk_no, chunk) in candidates.chunks(CHUNK).enumerate() {
        if cancel.is_some_and(CancelToken::is_cancelled) {
            complete = false;
            break;
        }
        let outcomes: Vec<Result<CandidateOutcome, SearchError>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|row1| run_candidate(cfg, row1, flag.as_deref()))
                .collect()
        });
        for outcome in outcomes {
            let outcome = outcome?;
            counters.merge(&outcome.counters);
            found.extend(outcome.found);
            complete &= !outcome.cancelled;
        }
        let done = ((chunk_no + 1) * CHUNK).min(candidates.len());
        log::info!(
            "first rows {done}/{}: {} sequences; row 6 survivors {}",
            candidates.len(),
            found.len(),
            counters.rows[HEXAGON_LEN as usize - 1].edges
        );
        for r in &counters.rows {
            log::debug!(
                "row {}: opposite {} faces {} edges {}",
                r.row,
                r.opposite,
                r.faces,
                r.edges
            );
        }
        if !complete {
            break;
        }
        if let Some(limit) = cfg.limit {
            if found.len() >= limit {
                if found.len() > limit || done < candidates.len() {
                    complete = false;
                }
                found.truncate(limit);
                break;
            }
        }
    }
    found.sort_by_key(RotationSystem::to_rows);
    Ok(SearchResult {
        n: cfg.n,
        target_genus: cfg.target_genus,
        max_triangles: cfg.max_triangles(),
        sequences: found,
        counters,
        complete,
    })
}
