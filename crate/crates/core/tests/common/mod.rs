//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use splitauth_core::{AuthCode, Labels, SplittingDesign};

/// Naive qualifying-block count: linear scans and a hash set.
pub fn brute_count(design: &SplittingDesign, subset: &[u32]) -> u64 {
    let mut n = 0;
    'blocks: for block in design.blocks() {
        let mut used = HashSet::new();
        for &x in subset {
            let Some(j) = block.sub_blocks().iter().position(|sb| sb.contains(&x)) else {
                continue 'blocks;
            };
            if !used.insert(j) {
                continue 'blocks;
            }
        }
        n += 1;
    }
    n
}

pub fn all_subsets(v: u32, k: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, v: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..v {
            cur.push(x);
            rec(x + 1, v, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, v, k, &mut Vec::new(), &mut out);
    out
}

/// Classical t-design check: every t-subset lies in exactly lambda blocks,
/// ignoring sub-block structure.
pub fn classical_verify(design: &SplittingDesign, t: usize, lambda: u64) -> bool {
    let sets: Vec<HashSet<u32>> = design
        .blocks()
        .iter()
        .map(|b| b.points().collect())
        .collect();
    all_subsets(design.v() as u32, t).iter().all(|s| {
        sets.iter()
            .filter(|b| s.iter().all(|x| b.contains(x)))
            .count() as u64
            == lambda
    })
}

pub fn label(code_or_design_labels: &Labels, names: &[&str]) -> Vec<u32> {
    names
        .iter()
        .map(|n| code_or_design_labels.lookup(n).expect("known label"))
        .collect()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn choose_sources(u: usize, i: usize) -> Vec<Vec<usize>> {
    all_subsets(u as u32, i)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x as usize).collect())
        .collect()
}

/// Spells out the full joint distribution of (rule, source subset, split
/// choices) and evaluates the optimal opponent directly from it. No
/// posterior shortcut: every outcome carries its own probability.
pub fn explicit_deception(code: &AuthCode, i: usize, acceptance_only: bool) -> BigRational {
    let b = code.rule_count();
    let u = code.source_count();
    let v = code.message_count() as u32;
    let subsets = choose_sources(u, i);
    let p_rule = BigRational::new(BigInt::one(), BigInt::from(b));
    let p_subset = BigRational::new(BigInt::one(), BigInt::from(subsets.len()));
    // observation -> rule -> joint probability
    let mut joint: BTreeMap<Vec<u32>, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for (e, rule) in code.rules().iter().enumerate() {
        for s_set in &subsets {
            // every combination of one message per chosen source
            let mut combos: Vec<(Vec<u32>, BigRational)> = vec![(Vec::new(), &p_rule * &p_subset)];
            for &s in s_set {
                let cell = rule.cell(s);
                combos = combos
                    .into_iter()
                    .flat_map(|(msgs, p)| {
                        cell.iter().map(move |&m| {
                            let mut next = msgs.clone();
                            next.push(m);
                            (
                                next,
                                &p * BigRational::new(BigInt::one(), BigInt::from(cell.len())),
                            )
                        })
                    })
                    .collect();
            }
            for (mut msgs, p) in combos {
                msgs.sort_unstable();
                *joint
                    .entry(msgs)
                    .or_default()
                    .entry(e)
                    .or_insert_with(BigRational::zero) += p;
            }
        }
    }
    let mut total = BigRational::zero();
    for (observed, rules) in &joint {
        let mut best = BigRational::zero();
        for m in 0..v {
            if observed.contains(&m) {
                continue;
            }
            let mut win = BigRational::zero();
            for (&e, p) in rules {
                let rule = &code.rules()[e];
                let Some(src) = rule.source_of(m) else {
                    continue;
                };
                let seen: Vec<usize> = observed.iter().filter_map(|&x| rule.source_of(x)).collect();
                if acceptance_only || !seen.contains(&src) {
                    win += p;
                }
            }
            if win > best {
                best = win;
            }
        }
        total += best;
    }
    total
}

/// Random c-splitting code: each rule is a random choice of u disjoint
/// c-subsets of 0..v.
pub fn c_splitting_code() -> impl Strategy<Value = AuthCode> {
    (2usize..=10)
        .prop_flat_map(|v| (Just(v), 1usize..=(v / 2).min(3)))
        .prop_flat_map(|(v, c)| (Just(v), Just(c), 2usize..=(v / c).min(4)))
        .prop_flat_map(|(v, c, u)| {
            let rule = Just((0..v as u32).collect::<Vec<u32>>()).prop_shuffle();
            (
                Just(v),
                Just(c),
                Just(u),
                prop::collection::vec(rule, 1..=6),
            )
        })
        .prop_map(|(v, c, u, perms)| {
            let rules = perms
                .into_iter()
                .map(|perm| (0..u).map(|s| perm[s * c..(s + 1) * c].to_vec()).collect())
                .collect();
            AuthCode::new(Labels::numeric(v), rules).expect("disjoint by construction")
        })
}

/// Random splitting code whose cell sizes vary between 1 and 3.
pub fn general_code() -> impl Strategy<Value = AuthCode> {
    (3usize..=8, 2usize..=3)
        .prop_flat_map(|(v, u)| {
            let rule = (
                Just((0..v as u32).collect::<Vec<u32>>()).prop_shuffle(),
                prop::collection::vec(1usize..=3, u),
            );
            (Just(v), Just(u), prop::collection::vec(rule, 1..=5))
        })
        .prop_filter_map("cells must fit", |(v, u, rules)| {
            let mut out = Vec::new();
            for (perm, sizes) in rules {
                if sizes.iter().sum::<usize>() > v {
                    return None;
                }
                let mut at = 0;
                let mut cells = Vec::new();
                for s in 0..u {
                    cells.push(perm[at..at + sizes[s]].to_vec());
                    at += sizes[s];
                }
                out.push(cells);
            }
            AuthCode::new(Labels::numeric(v), out).ok()
        })
}
