//! Splitting authentication codes.
//!
//! An encoding rule `e` maps each source state `s` to a set `e(s)` of
//! messages; the sets of one rule are pairwise disjoint so the receiver can
//! always recover the source. Messages are dense indices `0..v` with
//! external names kept in a [`Labels`] table.

use std::fmt;

use crate::design::{Block, Labels, SplittingDesign};
use crate::error::{input, structure, Error, Result};
use crate::verify::verify_splitting_design;

const NONE: u32 = u32::MAX;

/// Index of the member of `e(s)` the transmitter emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitIndex(pub usize);

/// Receiver verdict on a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Source(usize),
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingRule {
    cells: Vec<Vec<u32>>,
    // message -> source, NONE when invalid
    owner: Vec<u32>,
}

impl EncodingRule {
    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn cell(&self, source: usize) -> &[u32] {
        &self.cells[source]
    }

    /// Source encoded by `message`, if the message is valid.
    pub fn source_of(&self, message: u32) -> Option<usize> {
        match self.owner.get(message as usize) {
            Some(&s) if s != NONE => Some(s as usize),
            _ => None,
        }
    }

    /// `|M(e)|`
    pub fn valid_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn max_cell(&self) -> usize {
        self.cells.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthCode {
    messages: Labels,
    sources: Vec<String>,
    rule_names: Vec<String>,
    rules: Vec<EncodingRule>,
}

impl AuthCode {
    /// Builds a code with default names `s_1..`, `e_1..`.
    pub fn new(messages: Labels, rules: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let u = rules.first().map_or(0, Vec::len);
        let sources = (1..=u).map(|j| format!("s_{j}")).collect();
        let names = (1..=rules.len()).map(|i| format!("e_{i}")).collect();
        Self::with_names(messages, sources, names, rules)
    }

    /// Validates disjointness, non-empty cells and message ranges.
    pub fn with_names(
        messages: Labels,
        sources: Vec<String>,
        rule_names: Vec<String>,
        rules: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let v = messages.len();
        let u = sources.len();
        if u == 0 {
            return Err(structure("a code needs at least one source state"));
        }
        if rule_names.len() != rules.len() {
            return Err(input("rule name count does not match rule count"));
        }
        let mut built = Vec::with_capacity(rules.len());
        for (i, mut cells) in rules.into_iter().enumerate() {
            if cells.len() != u {
                return Err(structure(format!(
                    "rule {} has {} cells, expected {u}",
                    i + 1,
                    cells.len()
                )));
            }
            let mut owner = vec![NONE; v];
            for (s, cell) in cells.iter_mut().enumerate() {
                cell.sort_unstable();
                if cell.is_empty() {
                    return Err(structure(format!(
                        "rule {} source {} has an empty cell",
                        i + 1,
                        s + 1
                    )));
                }
                for &m in cell.iter() {
                    let slot = owner.get_mut(m as usize).ok_or_else(|| {
                        structure(format!("rule {} message {m} out of range", i + 1))
                    })?;
                    if *slot != NONE {
                        return Err(structure(format!(
                            "rule {} uses message `{}` twice",
                            i + 1,
                            messages.name(m)
                        )));
                    }
                    *slot = s as u32;
                }
            }
            built.push(EncodingRule { cells, owner });
        }
        Ok(AuthCode {
            messages,
            sources,
            rule_names,
            rules: built,
        })
    }

    pub fn messages(&self) -> &Labels {
        &self.messages
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn source_names(&self) -> &[String] {
        &self.sources
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn rule_names(&self) -> &[String] {
        &self.rule_names
    }

    pub fn rules(&self) -> &[EncodingRule] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// `Some(c)` when every cell of every rule has exactly `c` messages.
    pub fn uniform_split(&self) -> Option<usize> {
        let c = self.rules.first()?.cells[0].len();
        self.rules
            .iter()
            .all(|r| r.cells.iter().all(|x| x.len() == c))
            .then_some(c)
    }

    fn rule(&self, rule: usize) -> Result<&EncodingRule> {
        self.rules
            .get(rule)
            .ok_or_else(|| input(format!("rule {rule} out of range 0..{}", self.rules.len())))
    }

    /// The `split`-th smallest message of `e(source)`.
    pub fn encode(&self, rule: usize, source: usize, split: SplitIndex) -> Result<u32> {
        let r = self.rule(rule)?;
        let cell = r.cells.get(source).ok_or_else(|| {
            input(format!(
                "source {source} out of range 0..{}",
                self.sources.len()
            ))
        })?;
        cell.get(split.0).copied().ok_or_else(|| {
            input(format!(
                "split index {} out of range 0..{}",
                split.0,
                cell.len()
            ))
        })
    }

    pub fn decode(&self, rule: usize, message: u32) -> Result<Decoded> {
        Ok(self
            .rule(rule)?
            .source_of(message)
            .map_or(Decoded::Reject, Decoded::Source))
    }

    /// `M(e)`, sorted.
    pub fn valid_messages(&self, rule: usize) -> Result<Vec<u32>> {
        let mut all: Vec<u32> = self.rule(rule)?.cells.iter().flatten().copied().collect();
        all.sort_unstable();
        Ok(all)
    }

    /// `f_e(M')`: sources whose cell meets `messages`, sorted.
    pub fn source_trace(&self, rule: usize, messages: &[u32]) -> Result<Vec<usize>> {
        let r = self.rule(rule)?;
        let mut out: Vec<usize> = messages.iter().filter_map(|&m| r.source_of(m)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Copy without rule `rule`.
    pub fn without_rule(&self, rule: usize) -> Result<AuthCode> {
        self.rule(rule)?;
        let mut c = self.clone();
        c.rules.remove(rule);
        c.rule_names.remove(rule);
        Ok(c)
    }

    /// Cells of every rule reordered by least message; rule order kept.
    pub fn canonical_cells(&self) -> Vec<Vec<Vec<u32>>> {
        self.rules
            .iter()
            .map(|r| {
                let mut cells = r.cells.clone();
                cells.sort();
                cells
            })
            .collect()
    }

    pub fn display_cell(&self, cell: &[u32]) -> String {
        let names: Vec<&str> = cell.iter().map(|&m| self.messages.name(m)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Display for Decoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoded::Source(s) => write!(f, "s_{}", s + 1),
            Decoded::Reject => f.write_str("reject"),
        }
    }
}

/// One rule per block; source `s_j` gets the j-th sub-block in least-element
/// order. The design must verify at `(t, 1)` with `t >= 2`.
pub fn design_to_code(design: &SplittingDesign, t: u64) -> Result<AuthCode> {
    if t < 2 {
        return Err(Error::Refused(format!(
            "strength t = {t} must be at least 2"
        )));
    }
    let report = verify_splitting_design(design, t, 1)?;
    if !report.passed {
        return Err(Error::Refused(format!(
            "design does not verify as a {t}-design with lambda = 1"
        )));
    }
    let rules = design
        .blocks()
        .iter()
        .map(|b| b.canonical().sub_blocks().to_vec())
        .collect();
    AuthCode::new(design.labels().clone(), rules)
}

/// One block per rule with sub-blocks `e(s_1), ..., e(s_u)`, returned in
/// canonical form. Needs a c-splitting code.
pub fn code_to_design(code: &AuthCode) -> Result<SplittingDesign> {
    let c = code
        .uniform_split()
        .ok_or_else(|| structure("cells differ in size; only c-splitting codes map to designs"))?;
    let blocks = code
        .rules
        .iter()
        .map(|r| Block::new(r.cells.clone()))
        .collect();
    let design =
        SplittingDesign::with_labels(code.messages.clone(), c, code.source_count(), blocks)?;
    Ok(design.canonicalize())
}
