//! Splitting design data model.
//!
//! A splitting design lives on the dense point set `0..v`. Each block is a
//! list of `u` pairwise disjoint sub-blocks of exactly `c` points. External
//! labels (as written in design files) are kept in a [`Labels`] table so the
//! design can be printed back in its original vocabulary.

use std::collections::HashMap;
use std::fmt;

use crate::error::{input, structure, Result};

/// The parameter tuple `t-(v, b, l = c*u, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub t: u64,
    pub v: u64,
    /// Number of blocks. `None` before a search has fixed it.
    pub b: Option<u64>,
    pub c: u64,
    pub u: u64,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(t: u64, v: u64, c: u64, u: u64, lambda: u64) -> Result<Self> {
        let p = DesignParams {
            t,
            v,
            b: None,
            c,
            u,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_blocks(mut self, b: u64) -> Result<Self> {
        if b == 0 {
            return Err(input("b must be positive"));
        }
        self.b = Some(b);
        Ok(self)
    }

    /// Block size `l = c * u`.
    pub fn l(&self) -> u64 {
        self.c * self.u
    }

    fn validate(&self) -> Result<()> {
        if [self.t, self.v, self.c, self.u, self.lambda].contains(&0) {
            return Err(input("t, v, c, u and lambda must all be positive"));
        }
        if self.t > self.u {
            return Err(input(format!("t = {} exceeds u = {}", self.t, self.u)));
        }
        match self.c.checked_mul(self.u) {
            Some(l) if l <= self.v => Ok(()),
            _ => Err(input(format!(
                "l = c*u = {}*{} exceeds v = {}",
                self.c, self.u, self.v
            ))),
        }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.b.map_or_else(|| "?".to_string(), |b| b.to_string());
        write!(
            f,
            "{}-({},{},{}={}x{},{})",
            self.t,
            self.v,
            b,
            self.l(),
            self.c,
            self.u,
            self.lambda
        )
    }
}

/// External names for the dense points `0..v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Labels {
    /// Labels `"0"`, `"1"`, ... `"n-1"`.
    pub fn numeric(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect()).expect("distinct by construction")
    }

    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(input("empty label"));
            }
            if index.insert(name.clone(), i as u32).is_some() {
                return Err(input(format!("duplicate label `{name}`")));
            }
        }
        Ok(Labels { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, point: u32) -> &str {
        &self.names[point as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True when point `i` is named `i`.
    pub fn is_numeric(&self) -> bool {
        self.names
            .iter()
            .enumerate()
            .all(|(i, n)| *n == i.to_string())
    }

    /// Resolves a list of names to dense points.
    pub fn resolve<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<u32>> {
        names
            .iter()
            .map(|n| {
                self.lookup(n.as_ref())
                    .ok_or_else(|| input(format!("unknown label `{}`", n.as_ref())))
            })
            .collect()
    }
}

/// One block: an ordered list of sub-blocks, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    sub_blocks: Vec<Vec<u32>>,
}

impl Block {
    /// Sorts points inside each sub-block; sub-block order is kept.
    pub fn new(mut sub_blocks: Vec<Vec<u32>>) -> Self {
        for sb in &mut sub_blocks {
            sb.sort_unstable();
        }
        Block { sub_blocks }
    }

    pub fn sub_blocks(&self) -> &[Vec<u32>] {
        &self.sub_blocks
    }

    pub fn points(&self) -> impl Iterator<Item = u32> + '_ {
        self.sub_blocks.iter().flatten().copied()
    }

    /// Index of the sub-block holding `point`, if any.
    pub fn sub_block_of(&self, point: u32) -> Option<usize> {
        self.sub_blocks
            .iter()
            .position(|sb| sb.binary_search(&point).is_ok())
    }

    /// Sub-blocks ordered by least element.
    pub fn canonical(&self) -> Block {
        let mut sub_blocks = self.sub_blocks.clone();
        sub_blocks.sort_unstable();
        Block { sub_blocks }
    }
}

/// Checks one block against the shape `u` sub-blocks of `c` distinct points
/// drawn from `labels`.
pub(crate) fn check_block(
    block: &Block,
    labels: &Labels,
    c: usize,
    u: usize,
) -> Result<(), String> {
    let v = labels.len();
    if block.sub_blocks.len() != u {
        return Err(format!(
            "{} sub-blocks, expected {u}",
            block.sub_blocks.len()
        ));
    }
    let mut seen = vec![false; v];
    for (j, sb) in block.sub_blocks.iter().enumerate() {
        if sb.len() != c {
            return Err(format!(
                "sub-block {} has {} points, expected {c}",
                j + 1,
                sb.len()
            ));
        }
        for &p in sb {
            let p = p as usize;
            if p >= v {
                return Err(format!("point {p} out of range 0..{v}"));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(format!("point `{}` appears twice", labels.name(p as u32)));
            }
        }
    }
    Ok(())
}

/// A structurally valid splitting design (coverage is not implied).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingDesign {
    v: usize,
    c: usize,
    u: usize,
    blocks: Vec<Block>,
    labels: Labels,
}

impl SplittingDesign {
    /// Checks ranges, sub-block sizes and disjointness inside every block.
    pub fn new(v: usize, c: usize, u: usize, blocks: Vec<Block>) -> Result<Self> {
        Self::with_labels(Labels::numeric(v), c, u, blocks)
    }

    pub fn with_labels(labels: Labels, c: usize, u: usize, blocks: Vec<Block>) -> Result<Self> {
        let v = labels.len();
        if c == 0 || u == 0 {
            return Err(structure("c and u must be positive"));
        }
        if c * u > v {
            return Err(structure(format!(
                "block size c*u = {} exceeds v = {v}",
                c * u
            )));
        }
        for (i, block) in blocks.iter().enumerate() {
            check_block(block, &labels, c, u)
                .map_err(|e| structure(format!("block {}: {e}", i + 1)))?;
        }
        Ok(SplittingDesign {
            v,
            c,
            u,
            blocks,
            labels,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// Design params with the given strength and index, `b` filled in.
    pub fn params(&self, t: u64, lambda: u64) -> Result<DesignParams> {
        DesignParams::new(t, self.v as u64, self.c as u64, self.u as u64, lambda)?
            .with_blocks(self.blocks.len() as u64)
    }

    /// Sorted points, sub-blocks by least element, then blocks
    /// lexicographically. Labels are carried over unchanged.
    pub fn canonicalize(&self) -> SplittingDesign {
        let mut blocks: Vec<Block> = self.blocks.iter().map(Block::canonical).collect();
        blocks.sort();
        SplittingDesign {
            blocks,
            ..self.clone()
        }
    }

    /// Same design with the block list replaced; used by mutation tests and
    /// callers that build designs incrementally.
    pub fn with_blocks(&self, blocks: Vec<Block>) -> Result<SplittingDesign> {
        Self::with_labels(self.labels.clone(), self.c, self.u, blocks)
    }

    pub fn display_block(&self, block: &Block) -> String {
        let parts: Vec<String> = block
            .sub_blocks
            .iter()
            .map(|sb| {
                let names: Vec<&str> = sb.iter().map(|&p| self.labels.name(p)).collect();
                format!("[{}]", names.join(","))
            })
            .collect();
        format!("[{}]", parts.join(","))
    }
}
