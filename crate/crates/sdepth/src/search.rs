//! Exact Stanley depth by complete backtracking search over interval
//! partitions, plus an independent brute-force oracle for tiny posets.
//!
//! The decision procedure asks whether a poset admits a partition whose
//! interval tops all have `rho >= k`. Elements are processed in `(rho, lex)`
//! order, a linear extension of the poset order, so the smallest uncovered
//! element must be the lo of its interval in any completion; branching over
//! admissible tops is therefore a complete search. The exact value is found
//! by scanning `k` downward from the ambient count: failures at high `k` are
//! cheap, and the first success is optimal, so exactly one expensive
//! "no partition" proof is ever run.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::ideal::MonomialIdeal;
use crate::poset::{
    for_each_in_box, CharacteristicPoset, Interval, IntervalPartition, PosetError,
};

/// Most elements the brute-force oracle will enumerate partitions of.
pub const ORACLE_MAX_ELEMENTS: usize = 18;

/// Knobs for the backtracking solver. Candidate tops are always tried in
/// decreasing-`rho`, then lexicographic, order.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of interval placements before giving up.
    pub node_budget: u64,
    /// Explore the root branching in parallel. The budget is split across
    /// root branches; the decided value matches single-threaded runs given
    /// sufficient budget, the witness may differ.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { node_budget: 100_000_000, parallel: false }
    }
}

#[derive(Debug)]
pub enum SearchOutcome {
    Found(IntervalPartition),
    NotFound,
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn found(self) -> Option<IntervalPartition> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Debug, Error)]
pub enum SdepthError {
    #[error("node budget exhausted; verified bounds {lower}..={upper}")]
    Budget { lower: usize, upper: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("poset has {0} elements; the oracle handles at most {ORACLE_MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// The exact value together with a witness partition achieving it.
#[derive(Debug)]
pub struct SdepthResult {
    pub value: usize,
    pub witness: IntervalPartition,
}

struct CoverMap {
    words: Vec<u64>,
    uncovered: usize,
}

impl CoverMap {
    fn new(len: usize) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        // mark padding past `len` as covered so scans stop at the boundary
        if len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last = !0u64 << (len % 64);
            }
        }
        CoverMap { words, uncovered: len }
    }

    #[inline]
    fn is_covered(&self, idx: u32) -> bool {
        (self.words[idx as usize / 64] >> (idx % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, idx: u32) {
        self.words[idx as usize / 64] |= 1 << (idx % 64);
        self.uncovered -= 1;
    }

    #[inline]
    fn clear(&mut self, idx: u32) {
        self.words[idx as usize / 64] &= !(1 << (idx % 64));
        self.uncovered += 1;
    }

    fn first_uncovered(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut word = !self.words[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = !self.words[w];
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Candidate {
    rho: u32,
    lexkey: u64,
    code: u64,
}

enum Step {
    Found,
    NotFound,
    Budget,
}

struct Searcher<'a> {
    poset: &'a CharacteristicPoset,
    k: usize,
    covered: CoverMap,
    budget: u64,
    /// Interval stack as (lo element index, hi code).
    chosen: Vec<(u32, u64)>,
    /// Per-depth scratch: element indices covered by the interval at that depth.
    scratch: Vec<Vec<u32>>,
}

impl<'a> Searcher<'a> {
    fn new(poset: &'a CharacteristicPoset, k: usize, budget: u64) -> Self {
        Searcher {
            poset,
            k,
            covered: CoverMap::new(poset.len()),
            budget,
            chosen: Vec::new(),
            scratch: Vec::new(),
        }
    }

    /// All admissible tops for an interval starting at `lo`: elements `w`
    /// with `lo <= w <= g`, `rho(w) >= k`, and `[lo, w]` fully uncovered,
    /// in decreasing-`rho`-then-lex order.
    fn candidates(&self, lo: &[u32]) -> Vec<Candidate> {
        let g = self.poset.bound().coords();
        let weights = self.poset.weights();
        let n = lo.len();
        let mut out = Vec::new();
        let mut cur = lo.to_vec();
        let mut code: u64 = lo.iter().zip(weights).map(|(&c, &w)| u64::from(c) * w).sum();
        loop {
            let mut r = 0u32;
            let mut lexkey = 0u64;
            for j in 0..n {
                if cur[j] == g[j] {
                    r += 1;
                }
                lexkey = lexkey * (u64::from(g[j]) + 1) + u64::from(cur[j]);
            }
            if r as usize >= self.k && self.box_uncovered(lo, &cur) {
                out.push(Candidate { rho: r, lexkey, code });
            }
            let mut j = 0;
            while j < n && cur[j] == g[j] {
                code -= u64::from(cur[j] - lo[j]) * weights[j];
                cur[j] = lo[j];
                j += 1;
            }
            if j == n {
                break;
            }
            cur[j] += 1;
            code += weights[j];
        }
        out.sort_unstable_by_key(|c| (std::cmp::Reverse(c.rho), c.lexkey));
        out
    }

    fn box_uncovered(&self, lo: &[u32], hi: &[u32]) -> bool {
        for_each_in_box(lo, hi, self.poset.weights(), |code| {
            let idx = self.poset.index_of_code(code).expect("box inside up-set");
            !self.covered.is_covered(idx)
        })
    }

    fn cover(&mut self, lo: &[u32], hi: &[u32], depth: usize) {
        if self.scratch.len() <= depth {
            self.scratch.resize_with(depth + 1, Vec::new);
        }
        let mut buf = std::mem::take(&mut self.scratch[depth]);
        buf.clear();
        for_each_in_box(lo, hi, self.poset.weights(), |code| {
            let idx = self.poset.index_of_code(code).expect("box inside up-set");
            buf.push(idx);
            true
        });
        for &idx in &buf {
            self.covered.set(idx);
        }
        self.scratch[depth] = buf;
    }

    fn uncover(&mut self, depth: usize) {
        let buf = std::mem::take(&mut self.scratch[depth]);
        for &idx in &buf {
            self.covered.clear(idx);
        }
        self.scratch[depth] = buf;
    }

    /// Dead-end check: every uncovered element whose own `rho` is below `k`
    /// must still see some uncovered superset of `rho >= k`, or no interval
    /// can ever cover it. Elements with `rho >= k` cover themselves.
    fn lookahead_ok(&self, from: usize) -> bool {
        let g = self.poset.bound().coords();
        let mut idx = from;
        while let Some(i) = self.covered.first_uncovered(idx) {
            if self.poset.rho_at(i) < self.k {
                let e = self.poset.element(i);
                let found = !for_each_in_box(e.coords(), g, self.poset.weights(), |code| {
                    let j = self.poset.index_of_code(code).expect("box inside up-set");
                    // keep walking while no viable top is seen
                    !(self.poset.rho_at(j as usize) >= self.k && !self.covered.is_covered(j))
                });
                if !found {
                    return false;
                }
            }
            idx = i + 1;
        }
        true
    }

    fn run(&mut self, from: usize) -> Step {
        let lo_idx = match self.covered.first_uncovered(from) {
            None => return Step::Found,
            Some(i) => i,
        };
        let lo = self.poset.element(lo_idx);
        let depth = self.chosen.len();
        for cand in self.candidates(lo.coords()) {
            if self.budget == 0 {
                return Step::Budget;
            }
            self.budget -= 1;
            let hi = self.poset.decode(cand.code);
            self.cover(lo.coords(), hi.coords(), depth);
            self.chosen.push((lo_idx as u32, cand.code));
            if self.lookahead_ok(lo_idx + 1) {
                match self.run(lo_idx + 1) {
                    Step::NotFound => {}
                    done => return done, // keep state for witness extraction
                }
            }
            self.chosen.pop();
            self.uncover(depth);
        }
        Step::NotFound
    }

    fn witness(&self, poset: &Arc<CharacteristicPoset>) -> IntervalPartition {
        let intervals = self
            .chosen
            .iter()
            .map(|&(lo_idx, hi_code)| {
                Interval::new(poset.element(lo_idx as usize), poset.decode(hi_code))
            })
            .collect();
        IntervalPartition::new(Arc::clone(poset), intervals)
    }
}

/// Decide whether the poset admits a partition with every interval top of
/// `rho >= k`. `Found` witnesses verify and achieve at least `k`;
/// `NotFound` is the result of a complete search.
pub fn has_partition_min_rho(
    poset: &Arc<CharacteristicPoset>,
    k: usize,
    cfg: &SearchConfig,
) -> SearchOutcome {
    if poset.is_empty() {
        return SearchOutcome::Found(IntervalPartition::new(Arc::clone(poset), Vec::new()));
    }
    if k > poset.ambient() {
        return SearchOutcome::NotFound;
    }

    if cfg.parallel {
        return parallel_root(poset, k, cfg);
    }

    let mut s = Searcher::new(poset, k, cfg.node_budget);
    if !s.lookahead_ok(0) {
        return SearchOutcome::NotFound;
    }
    match s.run(0) {
        Step::Found => {
            let witness = s.witness(poset);
            debug_assert!(witness.verify().is_ok());
            assert!(witness.min_rho() >= k, "solver produced a witness below k");
            SearchOutcome::Found(witness)
        }
        Step::NotFound => SearchOutcome::NotFound,
        Step::Budget => SearchOutcome::BudgetExceeded,
    }
}

fn parallel_root(
    poset: &Arc<CharacteristicPoset>,
    k: usize,
    cfg: &SearchConfig,
) -> SearchOutcome {
    let probe = Searcher::new(poset, k, 0);
    if !probe.lookahead_ok(0) {
        return SearchOutcome::NotFound;
    }
    let root_lo = poset.element(0);
    let cands = probe.candidates(root_lo.coords());
    if cands.is_empty() {
        return SearchOutcome::NotFound;
    }
    let per_branch = (cfg.node_budget / cands.len() as u64).max(1);
    let budget_hit = AtomicBool::new(false);

    let found = cands.par_iter().find_map_first(|cand| {
        let mut s = Searcher::new(poset, k, per_branch);
        let hi = poset.decode(cand.code);
        s.cover(root_lo.coords(), hi.coords(), 0);
        s.chosen.push((0, cand.code));
        if !s.lookahead_ok(1) {
            return None;
        }
        match s.run(1) {
            Step::Found => Some(s.witness(poset)),
            Step::NotFound => None,
            Step::Budget => {
                budget_hit.store(true, Ordering::Relaxed);
                None
            }
        }
    });

    match found {
        Some(witness) => {
            debug_assert!(witness.verify().is_ok());
            assert!(witness.min_rho() >= k, "solver produced a witness below k");
            SearchOutcome::Found(witness)
        }
        None if budget_hit.load(Ordering::Relaxed) => SearchOutcome::BudgetExceeded,
        None => SearchOutcome::NotFound,
    }
}

/// Exact Stanley depth of the ideal on its default poset, with a witness.
pub fn sdepth_exact(
    ideal: &MonomialIdeal,
    cfg: &SearchConfig,
) -> Result<SdepthResult, SdepthError> {
    let poset = CharacteristicPoset::build(ideal, None)?;
    sdepth_exact_on(&poset, cfg)
}

/// Exact Stanley depth on an already-built poset (any valid bound).
pub fn sdepth_exact_on(
    poset: &Arc<CharacteristicPoset>,
    cfg: &SearchConfig,
) -> Result<SdepthResult, SdepthError> {
    let n = poset.ambient();
    let mut upper = n;
    for k in (0..=n).rev() {
        match has_partition_min_rho(poset, k, cfg) {
            SearchOutcome::Found(witness) => {
                return Ok(SdepthResult { value: k, witness });
            }
            SearchOutcome::NotFound => upper = k.saturating_sub(1),
            SearchOutcome::BudgetExceeded => {
                return Err(SdepthError::Budget { lower: 0, upper });
            }
        }
    }
    unreachable!("a poset always admits the all-singletons partition at k = 0")
}

/// Exhaustive oracle: enumerate every interval partition of a small poset
/// (at most [`ORACLE_MAX_ELEMENTS`] elements), with no pruning, and report
/// the best achievable minimum `rho`. Independent of the solver's branching
/// logic; used to cross-check [`sdepth_exact`].
pub fn brute_force_sdepth(ideal: &MonomialIdeal) -> Result<usize, OracleError> {
    let poset = CharacteristicPoset::build(ideal, None)?;
    brute_force_sdepth_on(&poset)
}

pub fn brute_force_sdepth_on(poset: &Arc<CharacteristicPoset>) -> Result<usize, OracleError> {
    if poset.len() > ORACLE_MAX_ELEMENTS {
        return Err(OracleError::TooLarge(poset.len()));
    }
    let mut covered = vec![false; poset.len()];
    let mut best = None;
    enumerate_partitions(poset, &mut covered, poset.ambient(), &mut best);
    Ok(best.unwrap_or(poset.ambient()))
}

fn enumerate_partitions(
    poset: &CharacteristicPoset,
    covered: &mut Vec<bool>,
    min_so_far: usize,
    best: &mut Option<usize>,
) {
    let lo_idx = match covered.iter().position(|&c| !c) {
        None => {
            // complete partition
            let cur = best.get_or_insert(min_so_far);
            *cur = (*cur).max(min_so_far);
            return;
        }
        Some(i) => i,
    };
    let lo = poset.element(lo_idx);
    let g = poset.bound().coords();
    let weights = poset.weights();

    // every top above lo whose whole box is uncovered
    let mut tops: Vec<u64> = Vec::new();
    for_each_in_box(lo.coords(), g, weights, |code| {
        tops.push(code);
        true
    });
    for top in tops {
        let hi = poset.decode(top);
        let mut member_idxs = Vec::new();
        let free = for_each_in_box(lo.coords(), hi.coords(), weights, |code| {
            let idx = poset.index_of_code(code).expect("box inside up-set") as usize;
            if covered[idx] {
                false
            } else {
                member_idxs.push(idx);
                true
            }
        });
        if !free {
            continue;
        }
        for &i in &member_idxs {
            covered[i] = true;
        }
        let rho_top = poset.rho(&hi);
        enumerate_partitions(poset, covered, min_so_far.min(rho_top), best);
        for &i in &member_idxs {
            covered[i] = false;
        }
    }
}
