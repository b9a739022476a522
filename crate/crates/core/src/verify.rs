//! Coverage verification of splitting designs.
//!
//! A block qualifies for a point set when every point lies in the block and
//! no two of them share a sub-block. Sub-blocks are disjoint, so this is a
//! plain pairwise check on sub-block indices.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::design::SplittingDesign;
use crate::error::{input, Result};
use crate::subsets::next_combination;

const ABSENT: u32 = u32::MAX;

/// Point-to-sub-block lookup for every block, plus per-point block lists.
#[derive(Debug, Clone)]
pub struct Incidence {
    v: usize,
    b: usize,
    sub_of: Vec<u32>,
    by_point: Vec<Vec<u32>>,
}

impl Incidence {
    pub fn new(design: &SplittingDesign) -> Self {
        let v = design.v();
        let mut sub_of = vec![ABSENT; v * design.b()];
        let mut by_point = vec![Vec::new(); v];
        for (i, block) in design.blocks().iter().enumerate() {
            for (j, sb) in block.sub_blocks().iter().enumerate() {
                for &p in sb {
                    sub_of[i * v + p as usize] = j as u32;
                    by_point[p as usize].push(i as u32);
                }
            }
        }
        Incidence {
            v,
            b: design.b(),
            sub_of,
            by_point,
        }
    }

    pub fn qualifies(&self, block: usize, points: &[u32]) -> bool {
        let row = &self.sub_of[block * self.v..(block + 1) * self.v];
        for (k, &p) in points.iter().enumerate() {
            let j = row[p as usize];
            if j == ABSENT || points[..k].iter().any(|&q| row[q as usize] == j) {
                return false;
            }
        }
        true
    }

    /// Number of qualifying blocks; `points` must be distinct and in range.
    pub fn count(&self, points: &[u32]) -> u64 {
        match points
            .iter()
            .min_by_key(|&&p| self.by_point[p as usize].len())
        {
            None => self.b as u64,
            Some(&rarest) => self.by_point[rarest as usize]
                .iter()
                .filter(|&&blk| self.qualifies(blk as usize, points))
                .count() as u64,
        }
    }
}

/// Blocks of `design` qualifying for `subset` (points pairwise in distinct
/// sub-blocks of the block).
pub fn count_qualifying_blocks(design: &SplittingDesign, subset: &[u32]) -> Result<u64> {
    check_subset(design, subset)?;
    Ok(Incidence::new(design).count(subset))
}

fn check_subset(design: &SplittingDesign, subset: &[u32]) -> Result<()> {
    if subset.len() > design.u() {
        return Err(input(format!(
            "subset of size {} exceeds u = {}",
            subset.len(),
            design.u()
        )));
    }
    for (k, &p) in subset.iter().enumerate() {
        if p as usize >= design.v() {
            return Err(input(format!("point {p} out of range 0..{}", design.v())));
        }
        if subset[..k].contains(&p) {
            return Err(input(format!("point {p} repeated in subset")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub strength: u64,
    pub lambda: u64,
    /// Lexicographically least failing t-subset with its observed count.
    pub counterexample: Option<Counterexample>,
    /// Observed qualifying-block count -> number of t-subsets with that count.
    pub histogram: BTreeMap<u64, u64>,
}

/// A t-subset and its qualifying-block count.
pub type Counterexample = (Vec<u32>, u64);

/// Histogram of qualifying-block counts over all t-subsets, with the least
/// t-subset whose count differs from `lambda`.
pub fn coverage_histogram(
    design: &SplittingDesign,
    t: usize,
    lambda: u64,
) -> (BTreeMap<u64, u64>, Option<Counterexample>) {
    let inc = Incidence::new(design);
    let v = design.v() as u32;
    if t == 0 {
        let n = design.b() as u64;
        let fail = (n != lambda).then(|| (Vec::new(), n));
        return (BTreeMap::from([(n, 1)]), fail);
    }
    let partials: Vec<_> = (0..v)
        .into_par_iter()
        .map(|first| {
            let mut hist = BTreeMap::new();
            let mut fail = None;
            let rest_len = t - 1;
            if (v - first - 1) < rest_len as u32 {
                return (hist, fail);
            }
            // rest ranges over (t-1)-subsets of first+1..v, shifted to 0-based
            let span = v - first - 1;
            let mut rest: Vec<u32> = (0..rest_len as u32).collect();
            let mut subset = vec![0u32; t];
            loop {
                subset[0] = first;
                for (k, &r) in rest.iter().enumerate() {
                    subset[k + 1] = first + 1 + r;
                }
                let n = inc.count(&subset);
                *hist.entry(n).or_insert(0u64) += 1;
                if n != lambda && fail.is_none() {
                    fail = Some((subset.clone(), n));
                }
                if !next_combination(&mut rest, span) {
                    break;
                }
            }
            (hist, fail)
        })
        .collect();
    let mut hist = BTreeMap::new();
    let mut fail = None;
    for (h, f) in partials {
        for (k, n) in h {
            *hist.entry(k).or_insert(0) += n;
        }
        if fail.is_none() {
            fail = f;
        }
    }
    (hist, fail)
}

/// Checks that every t-subset of points has exactly `lambda` qualifying
/// blocks. Structural validity is guaranteed by [`SplittingDesign`] itself.
pub fn verify_splitting_design(
    design: &SplittingDesign,
    t: u64,
    lambda: u64,
) -> Result<VerificationReport> {
    if t == 0 || t as usize > design.u() {
        return Err(input(format!(
            "strength t = {t} must satisfy 1 <= t <= u = {}",
            design.u()
        )));
    }
    let (histogram, counterexample) = coverage_histogram(design, t as usize, lambda);
    Ok(VerificationReport {
        passed: counterexample.is_none(),
        strength: t,
        lambda,
        counterexample,
        histogram,
    })
}
