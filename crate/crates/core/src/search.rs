//! Backtracking search for `t-(v, b, l = c*u, 1)` splitting designs.
//!
//! With `lambda = 1` every t-subset must be covered exactly once, which makes
//! the problem an exact cover over ranked t-subsets. Covered subsets live in
//! a flat bitset. Each level anchors on the least uncovered t-subset and
//! branches over the blocks that cover it (anchor points in distinct
//! sub-blocks) without touching an already covered t-subset. Reaching `b`
//! blocks without a double cover means full coverage, because every block
//! covers exactly `c^t * C(u, t)` t-subsets and `b` times that is `C(v, t)`.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design::{Block, DesignParams, SplittingDesign};
use crate::error::{input, Error, Result};
use crate::feasibility::{check_divisibility, integral_blocks};
use crate::subsets::SubsetRanker;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restarts {
    Off,
    /// Restart `k` runs with a node budget of `initial_nodes * factor^k` and
    /// a candidate order reshuffled from `seed + k`.
    Geometric {
        initial_nodes: u64,
        factor: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_limit: Duration,
    pub node_limit: u64,
    /// Shuffles candidate order when set; natural lexicographic order otherwise.
    pub seed: Option<u64>,
    pub restarts: Restarts,
    /// Fix the first block to the lexicographically least admissible block.
    pub symmetry_breaking: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_limit: Duration::from_secs(600),
            node_limit: u64::MAX,
            seed: None,
            restarts: Restarts::Off,
            symmetry_breaking: true,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.time_limit.is_zero() || self.node_limit == 0 {
            return Err(input("search limits must be positive"));
        }
        if let Restarts::Geometric {
            initial_nodes,
            factor,
        } = self.restarts
        {
            if initial_nodes == 0 || factor < 2 {
                return Err(input(
                    "geometric restarts need initial_nodes > 0 and factor >= 2",
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
    Timeout,
    PrunedInfeasible,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::Timeout => "timeout",
            SearchStatus::PrunedInfeasible => "pruned-infeasible",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub runs: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub design: Option<SplittingDesign>,
    /// Number of blocks targeted (`C(v,t) / (c^t C(u,t))`), when integral.
    pub blocks: Option<u64>,
    pub stats: SearchStats,
    pub note: Option<String>,
}

struct Candidate {
    block: Vec<Vec<u32>>,
    ranks: Vec<u64>,
}

enum Flow {
    Found,
    Exhausted,
    Budget,
    Limit,
}

struct Solver<'a> {
    params: &'a DesignParams,
    ranker: SubsetRanker,
    b: usize,
    covered: Vec<u64>,
    chosen: Vec<Rc<Candidate>>,
    cache: HashMap<u64, Rc<Vec<Rc<Candidate>>>>,
    rng: Option<ChaCha8Rng>,
    stats: SearchStats,
    budget: u64,
    run_nodes: u64,
    node_limit: u64,
    deadline: Instant,
    symmetry_breaking: bool,
    scratch: Vec<u32>,
}

impl<'a> Solver<'a> {
    fn is_covered(&self, r: u64) -> bool {
        self.covered[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    fn toggle(&mut self, ranks: &[u64]) {
        for &r in ranks {
            self.covered[(r / 64) as usize] ^= 1 << (r % 64);
        }
    }

    fn least_uncovered(&self, from: u64) -> Option<u64> {
        let total = self.ranker.count();
        let mut word = (from / 64) as usize;
        let mut mask = !0u64 << (from % 64);
        while word < self.covered.len() {
            let free = !self.covered[word] & mask;
            if free != 0 {
                let r = word as u64 * 64 + free.trailing_zeros() as u64;
                return (r < total).then_some(r);
            }
            word += 1;
            mask = !0;
        }
        None
    }

    fn candidates(&mut self, anchor_rank: u64) -> Rc<Vec<Rc<Candidate>>> {
        if let Some(c) = self.cache.get(&anchor_rank) {
            return Rc::clone(c);
        }
        let mut anchor = Vec::new();
        self.ranker.unrank(anchor_rank, &mut anchor);
        let mut list: Vec<Rc<Candidate>> = blocks_through(self.params, &anchor)
            .into_iter()
            .map(|block| {
                let ranks = covered_ranks(
                    &block,
                    self.params.t as usize,
                    &self.ranker,
                    &mut self.scratch,
                );
                Rc::new(Candidate { block, ranks })
            })
            .collect();
        if let Some(rng) = self.rng.as_mut() {
            list.shuffle(rng);
        }
        let list = Rc::new(list);
        self.cache.insert(anchor_rank, Rc::clone(&list));
        list
    }

    fn dfs(&mut self, depth: usize, from: u64) -> Flow {
        if depth == self.b {
            return Flow::Found;
        }
        let Some(anchor) = self.least_uncovered(from) else {
            // everything covered with fewer than b blocks cannot happen for
            // consistent parameters
            return Flow::Exhausted;
        };
        let mut cands = self.candidates(anchor);
        if depth == 0 && self.symmetry_breaking {
            // any block can be relabelled onto the least one, and with
            // lambda = 1 it is then the unique block through the anchor
            let least = cands
                .iter()
                .min_by(|a, b| a.block.cmp(&b.block))
                .map(Rc::clone);
            cands = Rc::new(least.into_iter().collect());
        }
        for cand in cands.iter() {
            self.stats.nodes += 1;
            self.run_nodes += 1;
            if self.stats.nodes >= self.node_limit {
                return Flow::Limit;
            }
            if self.run_nodes >= self.budget {
                return Flow::Budget;
            }
            if self.stats.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
                return Flow::Limit;
            }
            if cand.ranks.iter().any(|&r| self.is_covered(r)) {
                continue;
            }
            self.toggle(&cand.ranks);
            self.chosen.push(Rc::clone(cand));
            match self.dfs(depth + 1, anchor + 1) {
                Flow::Exhausted => {}
                other => return other,
            }
            self.chosen.pop();
            self.toggle(&cand.ranks);
            self.stats.backtracks += 1;
        }
        Flow::Exhausted
    }

    fn reset(&mut self, seed: Option<u64>, budget: u64) {
        self.covered.iter_mut().for_each(|w| *w = 0);
        self.chosen.clear();
        self.rng = seed.map(ChaCha8Rng::seed_from_u64);
        if seed.is_some() {
            self.cache.clear();
        }
        self.budget = budget;
        self.run_nodes = 0;
        self.stats.runs += 1;
    }
}

/// Every block (as sub-block lists, sub-blocks ordered by least element)
/// that places the sorted `anchor` points in pairwise distinct sub-blocks.
pub fn blocks_through(params: &DesignParams, anchor: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let (v, c, u) = (params.v as u32, params.c as usize, params.u as usize);
    let mut used = vec![false; v as usize];
    for &a in anchor {
        used[a as usize] = true;
    }
    let mut slots: Vec<Vec<u32>> = anchor.iter().map(|&a| vec![a]).collect();
    slots.resize(u, Vec::new());
    let mut out = Vec::new();
    fill(anchor.len(), 0, &mut slots, &mut used, v, c, &mut out);
    out
}

// Slots `0..t` already hold one anchor point each; later slots are free and
// are kept in increasing order of their least element.
fn fill(
    t: usize,
    slot: usize,
    slots: &mut Vec<Vec<u32>>,
    used: &mut Vec<bool>,
    v: u32,
    c: usize,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if slot == slots.len() {
        let mut block = slots.clone();
        for sb in &mut block {
            sb.sort_unstable();
        }
        block.sort();
        out.push(block);
        return;
    }
    if slots[slot].len() == c {
        return fill(t, slot + 1, slots, used, v, c, out);
    }
    let lower = match slots[slot].last() {
        // anchor slots take extra points in increasing order
        Some(_) if slot < t && slots[slot].len() == 1 => 0,
        Some(&last) => last + 1,
        // a free slot's least point exceeds the previous free slot's least point
        None if slot > t => slots[slot - 1][0] + 1,
        None => 0,
    };
    for p in lower..v {
        if used[p as usize] {
            continue;
        }
        used[p as usize] = true;
        slots[slot].push(p);
        fill(t, slot, slots, used, v, c, out);
        slots[slot].pop();
        used[p as usize] = false;
    }
}

/// Ranks of all t-subsets the block covers: one point from each of `t`
/// distinct sub-blocks.
fn covered_ranks(
    block: &[Vec<u32>],
    t: usize,
    ranker: &SubsetRanker,
    scratch: &mut Vec<u32>,
) -> Vec<u64> {
    fn walk(
        block: &[Vec<u32>],
        next_sub: usize,
        t: usize,
        pick: &mut Vec<u32>,
        ranker: &SubsetRanker,
        scratch: &mut Vec<u32>,
        out: &mut Vec<u64>,
    ) {
        if pick.len() == t {
            scratch.clear();
            scratch.extend_from_slice(pick);
            scratch.sort_unstable();
            out.push(ranker.rank(scratch));
            return;
        }
        for j in next_sub..block.len() {
            for &p in &block[j] {
                pick.push(p);
                walk(block, j + 1, t, pick, ranker, scratch, out);
                pick.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(
        block,
        0,
        t,
        &mut Vec::with_capacity(t),
        ranker,
        scratch,
        &mut out,
    );
    out
}

fn finish(
    status: SearchStatus,
    blocks: Option<u64>,
    stats: SearchStats,
    note: Option<String>,
) -> SearchOutcome {
    SearchOutcome {
        status,
        design: None,
        blocks,
        stats,
        note,
    }
}

/// Searches for a `t-(v, b, cu, 1)` splitting design. Parameters failing the
/// divisibility conditions, or with a non-integral block count, are
/// rejected without search.
pub fn search(params: &DesignParams, config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    if params.lambda != 1 {
        return Err(Error::Unsupported(format!(
            "search handles lambda = 1 only, got {}",
            params.lambda
        )));
    }
    let start = Instant::now();
    let failures = check_divisibility(params);
    if !failures.is_empty() {
        let note = format!("divisibility fails at s = {failures:?}");
        return Ok(finish(
            SearchStatus::PrunedInfeasible,
            None,
            SearchStats::default(),
            Some(note),
        ));
    }
    let Some(b) = integral_blocks(params) else {
        return Ok(finish(
            SearchStatus::PrunedInfeasible,
            None,
            SearchStats::default(),
            Some("non-integral b".into()),
        ));
    };
    if let Some(declared) = params.b {
        if declared != b {
            let note = format!("declared b = {declared} but lambda = 1 forces b = {b}");
            return Ok(finish(
                SearchStatus::PrunedInfeasible,
                Some(b),
                SearchStats::default(),
                Some(note),
            ));
        }
    }
    let ranker = SubsetRanker::new(params.v as usize, params.t as usize)
        .filter(|r| r.count() <= 1 << 32)
        .ok_or_else(|| Error::Unsupported("too many t-subsets for the coverage bitset".into()))?;
    let words = ranker.count().div_ceil(64) as usize;
    let mut solver = Solver {
        params,
        ranker,
        b: b as usize,
        covered: vec![0; words],
        chosen: Vec::with_capacity(b as usize),
        cache: HashMap::new(),
        rng: None,
        stats: SearchStats::default(),
        budget: u64::MAX,
        run_nodes: 0,
        node_limit: config.node_limit,
        deadline: start + config.time_limit,
        symmetry_breaking: config.symmetry_breaking,
        scratch: Vec::new(),
    };

    let mut run = 0u64;
    let flow = loop {
        let (seed, budget) = match config.restarts {
            Restarts::Off => (config.seed, u64::MAX),
            Restarts::Geometric {
                initial_nodes,
                factor,
            } => {
                let budget = factor
                    .checked_pow(run.min(u32::MAX as u64) as u32)
                    .and_then(|f| f.checked_mul(initial_nodes))
                    .unwrap_or(u64::MAX);
                (Some(config.seed.unwrap_or(0).wrapping_add(run)), budget)
            }
        };
        solver.reset(seed, budget);
        match solver.dfs(0, 0) {
            Flow::Budget => run += 1,
            other => break other,
        }
    };
    solver.stats.elapsed = start.elapsed();
    let stats = solver.stats;
    Ok(match flow {
        Flow::Found => {
            let blocks = solver
                .chosen
                .iter()
                .map(|c| Block::new(c.block.clone()))
                .collect();
            let design = SplittingDesign::new(
                params.v as usize,
                params.c as usize,
                params.u as usize,
                blocks,
            )?
            .canonicalize();
            SearchOutcome {
                status: SearchStatus::Found,
                design: Some(design),
                blocks: Some(b),
                stats,
                note: None,
            }
        }
        Flow::Exhausted => finish(SearchStatus::Exhausted, Some(b), stats, None),
        Flow::Limit | Flow::Budget => finish(SearchStatus::Timeout, Some(b), stats, None),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial_u64;

    #[test]
    fn blocks_through_counts() {
        // anchor {0,1,2}, c=2, u=3, v=10: partners from 7 points -> 7*6*5
        let p = DesignParams::new(3, 10, 2, 3, 1).unwrap();
        let all = blocks_through(&p, &[0, 1, 2]);
        assert_eq!(all.len(), 210);
        assert_eq!(
            all.iter().min().unwrap(),
            &vec![vec![0, 3], vec![1, 4], vec![2, 5]]
        );
        // t=2, c=2, u=3, v=8: anchor {0,1}; partners 6*5, then a free pair from 4
        let p = DesignParams::new(2, 8, 2, 3, 1).unwrap();
        let all = blocks_through(&p, &[0, 1]);
        assert_eq!(all.len(), 6 * 5 * 6);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        // c=3, u=3 with one anchor: choose 2 partners, then split 6 points
        // into two unordered triples
        let p = DesignParams::new(1, 9, 3, 3, 1).unwrap();
        assert_eq!(
            blocks_through(&p, &[4]).len() as u64,
            binomial_u64(8, 2).unwrap() * 10
        );
    }

    #[test]
    fn covered_rank_count() {
        let r = SubsetRanker::new(10, 3).unwrap();
        let ranks = covered_ranks(
            &[vec![0, 3], vec![1, 4], vec![2, 5]],
            3,
            &r,
            &mut Vec::new(),
        );
        assert_eq!(ranks.len(), 8);
    }

    #[test]
    fn rejects_bad_config() {
        let p = DesignParams::new(2, 9, 2, 2, 1).unwrap();
        let cfg = SearchConfig {
            node_limit: 0,
            ..Default::default()
        };
        assert!(search(&p, &cfg).is_err());
        let p2 = DesignParams::new(2, 9, 2, 2, 2).unwrap();
        assert!(matches!(
            search(&p2, &SearchConfig::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
